#include "nlocal/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlocal {

TwoQubitState::TwoQubitState(ComplexMatrix density) : rho(std::move(density)) {
    if (rho.dim != 4)
        throw DimensionError("TwoQubitState: density matrix must be 4x4");
    check_finite(rho);
    const double herm = hermiticity_error(rho);
    if (herm > kHermTol)
        throw ValidationError("TwoQubitState: not Hermitian (max deviation " +
                              std::to_string(herm) + ")");
    const cplx tr = trace(rho);
    if (std::abs(tr - cplx(1.0)) > kTraceTol)
        throw ValidationError("TwoQubitState: trace differs from 1 by " +
                              std::to_string(std::abs(tr - cplx(1.0))));
    const double min_eig = min_hermitian_eigenvalue(rho);
    if (min_eig < kPsdTol)
        throw ValidationError("TwoQubitState: not positive semidefinite (min eigenvalue " +
                              std::to_string(min_eig) + ")");
}

namespace {

// Tr[rho (sigma_m x sigma_n)], with index 3 meaning the identity.
const ComplexMatrix& pauli_or_id(int i) {
    return i == 3 ? paulis::id2() : paulis::sigma(i);
}

double pauli_trace(const ComplexMatrix& rho, int m, int n) {
    const ComplexMatrix op = kron(pauli_or_id(m), pauli_or_id(n));
    const cplx t = trace_product(op, rho);
    if (std::abs(t.imag()) > 1e-10)
        throw ValidationError("bloch_decompose: Pauli expectation has imaginary part " +
                              std::to_string(t.imag()));
    return t.real();
}

double clamp_correlation(double x) {
    if (x > 1.0 && x <= 1.0 + 1e-9)
        return 1.0;
    if (x < -1.0 && x >= -1.0 - 1e-9)
        return -1.0;
    if (std::abs(x) > 1.0)
        throw ValidationError("bloch_decompose: correlation entry out of [-1, 1]: " +
                              std::to_string(x));
    return x;
}

} // namespace

BlochForm bloch_decompose(const TwoQubitState& state) {
    BlochForm f;
    for (int i = 0; i < 3; ++i) {
        f.m_a[static_cast<std::size_t>(i)] = clamp_correlation(pauli_trace(state.rho, i, 3));
        f.m_b[static_cast<std::size_t>(i)] = clamp_correlation(pauli_trace(state.rho, 3, i));
        for (int j = 0; j < 3; ++j)
            f.t[static_cast<std::size_t>(3 * i + j)] =
                clamp_correlation(pauli_trace(state.rho, i, j));
    }
    return f;
}

TwoQubitState bloch_compose(const BlochForm& form) {
    ComplexMatrix rho = ComplexMatrix::identity(4);
    for (int i = 0; i < 3; ++i) {
        rho = rho + form.m_a[static_cast<std::size_t>(i)] * kron(paulis::sigma(i), paulis::id2());
        rho = rho + form.m_b[static_cast<std::size_t>(i)] * kron(paulis::id2(), paulis::sigma(i));
        for (int j = 0; j < 3; ++j)
            rho = rho + form.t[static_cast<std::size_t>(3 * i + j)] *
                            kron(paulis::sigma(i), paulis::sigma(j));
    }
    rho = cplx(0.25) * rho;
    const double min_eig = min_hermitian_eigenvalue(rho);
    if (min_eig < TwoQubitState::kPsdTol)
        throw ValidationError("unphysical Bloch form: min eigenvalue " + std::to_string(min_eig));
    return TwoQubitState(std::move(rho));
}

CorrelationSpectrum correlation_spectrum(const BlochForm& form) {
    const Mat3 r = mat3_mul(mat3_transpose(form.t), form.t);
    const auto lambda = eig_sym3(RealSym3::from(r, 1e-9));
    for (double l : lambda)
        if (l < -1e-10)
            throw ValidationError("correlation_spectrum: t^T t has eigenvalue " +
                                  std::to_string(l) + " below the PSD clamp threshold");
    return CorrelationSpectrum{lambda};
}

CorrelationSpectrum correlation_spectrum(const TwoQubitState& state) {
    return correlation_spectrum(bloch_decompose(state));
}

// ---------------------------------------------------------------------------
// Alignment.

namespace {

Vec3 mat3_col(const Mat3& m, int c) { return {m[0 + c], m[3 + c], m[6 + c]}; }

void set_col(Mat3& m, int c, const Vec3& v) {
    m[0 + c] = v[0];
    m[3 + c] = v[1];
    m[6 + c] = v[2];
}

Vec3 normalized_or(const Vec3& v, const Vec3& fallback) {
    const double n = norm(v);
    if (n < 1e-12)
        return fallback;
    return scaled(1.0 / n, v);
}

// Orthonormalize v against the given unit vectors, falling back to a basis
// vector when the residual vanishes (rank-deficient t).
Vec3 complete_orthonormal(const Vec3& v, const Vec3& u1) {
    Vec3 w = v - scaled(dot(v, u1), u1);
    if (norm(w) < 1e-12) {
        for (const Vec3& e : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
            w = e - scaled(dot(e, u1), u1);
            if (norm(w) >= 0.5)
                break;
        }
    }
    return scaled(1.0 / norm(w), w);
}

} // namespace

ComplexMatrix su2_from_rotation(const Mat3& rot) {
    // Quaternion extraction (Shepperd's branching for numerical safety).
    const double r00 = rot[0], r01 = rot[1], r02 = rot[2];
    const double r10 = rot[3], r11 = rot[4], r12 = rot[5];
    const double r20 = rot[6], r21 = rot[7], r22 = rot[8];
    double w, x, y, z;
    const double tr = r00 + r11 + r22;
    if (tr > 0.0) {
        const double s = std::sqrt(tr + 1.0) * 2.0;
        w = 0.25 * s;
        x = (r21 - r12) / s;
        y = (r02 - r20) / s;
        z = (r10 - r01) / s;
    } else if (r00 >= r11 && r00 >= r22) {
        const double s = std::sqrt(1.0 + r00 - r11 - r22) * 2.0;
        w = (r21 - r12) / s;
        x = 0.25 * s;
        y = (r01 + r10) / s;
        z = (r02 + r20) / s;
    } else if (r11 >= r22) {
        const double s = std::sqrt(1.0 + r11 - r00 - r22) * 2.0;
        w = (r02 - r20) / s;
        x = (r01 + r10) / s;
        y = 0.25 * s;
        z = (r12 + r21) / s;
    } else {
        const double s = std::sqrt(1.0 + r22 - r00 - r11) * 2.0;
        w = (r10 - r01) / s;
        x = (r02 + r20) / s;
        y = (r12 + r21) / s;
        z = 0.25 * s;
    }
    // U = w*I - i (x sx + y sy + z sz)
    ComplexMatrix u(2);
    u.at(0, 0) = cplx(w, -z);
    u.at(0, 1) = cplx(-y, -x);
    u.at(1, 0) = cplx(y, -x);
    u.at(1, 1) = cplx(w, z);
    return u;
}

TwoQubitState conjugate_local(const TwoQubitState& state, const ComplexMatrix& u_a,
                              const ComplexMatrix& u_b) {
    const ComplexMatrix u = kron(u_a, u_b);
    ComplexMatrix rho = matmul(matmul(u, state.rho), adjoint(u));
    // Renormalize the trace; unitaries from rotation extraction carry ~1e-16
    // roundoff that the strict state validation would otherwise amplify.
    const double tr = trace(rho).real();
    rho = cplx(1.0 / tr) * rho;
    return TwoQubitState(std::move(rho));
}

TwoQubitState swap_parties(const TwoQubitState& state) {
    static constexpr int perm[2] = {1, 0};
    return TwoQubitState(permute_qubits(state.rho, perm));
}

Alignment align_state(const TwoQubitState& state, AlignTarget target) {
    const BlochForm form = bloch_decompose(state);
    const Mat3 r = mat3_mul(mat3_transpose(form.t), form.t);
    const Eig3 eig = eig_sym3_vectors(RealSym3::from(r, 1e-9));

    // Right singular vectors from t^T t; left ones via t, with the third
    // forced by a cross product so det(U) = +1.
    Mat3 v_mat = eig.vectors;
    if (mat3_det(v_mat) < 0.0)
        set_col(v_mat, 2, scaled(-1.0, mat3_col(v_mat, 2)));
    const Vec3 v1 = mat3_col(v_mat, 0);
    const Vec3 v2 = mat3_col(v_mat, 1);

    const Vec3 u1 = normalized_or(mat3_vec(form.t, v1), Vec3{1, 0, 0});
    const Vec3 u2 = complete_orthonormal(mat3_vec(form.t, v2), u1);
    const Vec3 u3 = cross(u1, u2);
    Mat3 u_mat{};
    set_col(u_mat, 0, u1);
    set_col(u_mat, 1, u2);
    set_col(u_mat, 2, u3);

    // Axis assignment: which diagonal slot receives the k-th singular value.
    // chain: (s1, s2, s3) -> (z, x, y); star: (s1, s2, s3) -> (x, y, z).
    const std::array<int, 3> slot =
        target == AlignTarget::chain ? std::array<int, 3>{2, 0, 1} : std::array<int, 3>{0, 1, 2};
    Mat3 pi{};
    for (int k = 0; k < 3; ++k)
        pi[3 * slot[static_cast<std::size_t>(k)] + k] = 1.0;

    const Mat3 rot_a = mat3_mul(pi, mat3_transpose(u_mat));
    const Mat3 rot_b = mat3_mul(pi, mat3_transpose(v_mat));

    TwoQubitState aligned = conjugate_local(state, su2_from_rotation(rot_a),
                                            su2_from_rotation(rot_b));
    return Alignment{std::move(aligned), rot_a, rot_b};
}

// ---------------------------------------------------------------------------
// State families.

namespace {

std::array<cplx, 4> bell_amplitudes(BellLabel label) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (label) {
    case BellLabel::phi_plus: return {h, 0.0, 0.0, h};
    case BellLabel::phi_minus: return {h, 0.0, 0.0, -h};
    case BellLabel::psi_plus: return {0.0, h, h, 0.0};
    case BellLabel::psi_minus: return {0.0, h, -h, 0.0};
    }
    throw ValidationError("make_bell: unknown label");
}

} // namespace

TwoQubitState make_bell(BellLabel label) {
    return make_pure(bell_amplitudes(label));
}

TwoQubitState make_werner(double v, BellLabel base) {
    if (v < 0.0 || v > 1.0)
        throw ValidationError("make_werner: visibility must be in [0, 1], got " +
                              std::to_string(v));
    const std::array<cplx, 4> amps = bell_amplitudes(base);
    ComplexMatrix rho(4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            rho.at(i, j) = v * amps[static_cast<std::size_t>(i)] *
                           std::conj(amps[static_cast<std::size_t>(j)]);
        rho.at(i, i) += (1.0 - v) * 0.25;
    }
    return TwoQubitState(std::move(rho));
}

TwoQubitState make_pure(const std::array<cplx, 4>& amplitudes) {
    double n2 = 0.0;
    for (const cplx& a : amplitudes)
        n2 += std::norm(a);
    if (n2 < 1e-24)
        throw ValidationError("make_pure: amplitudes are not normalizable (zero vector)");
    const double inv = 1.0 / n2;
    ComplexMatrix rho(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho.at(i, j) = inv * amplitudes[static_cast<std::size_t>(i)] *
                           std::conj(amplitudes[static_cast<std::size_t>(j)]);
    return TwoQubitState(std::move(rho));
}

TwoQubitState make_state(const StateSpec& spec) {
    return std::visit(
        [](const auto& s) -> TwoQubitState {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BellSpec>)
                return make_bell(s.label);
            else if constexpr (std::is_same_v<T, WernerSpec>)
                return make_werner(s.v, s.base);
            else if constexpr (std::is_same_v<T, PureSpec>)
                return make_pure(s.amplitudes);
            else if constexpr (std::is_same_v<T, BlochSpec>)
                return bloch_compose(s.form);
            else
                return TwoQubitState(s.rho);
        },
        spec);
}

const char* bell_label_name(BellLabel label) {
    switch (label) {
    case BellLabel::phi_plus: return "phi+";
    case BellLabel::phi_minus: return "phi-";
    case BellLabel::psi_plus: return "psi+";
    case BellLabel::psi_minus: return "psi-";
    }
    return "?";
}

BellLabel bell_label_from_name(const std::string& name) {
    if (name == "phi+") return BellLabel::phi_plus;
    if (name == "phi-") return BellLabel::phi_minus;
    if (name == "psi+") return BellLabel::psi_plus;
    if (name == "psi-") return BellLabel::psi_minus;
    throw InputError("unknown Bell label '" + name + "' (expected phi+, phi-, psi+ or psi-)");
}

} // namespace nlocal
