#pragma once

#include <array>
#include <variant>

#include "nlocal/matkernel.hpp"

namespace nlocal {

/// Validated 4x4 density matrix of a two-qubit state: Hermitian to 1e-10,
/// unit trace to 1e-10, smallest eigenvalue >= -1e-9 (loose enough to accept
/// states round-tripped through text serialization).
struct TwoQubitState {
    ComplexMatrix rho;

    explicit TwoQubitState(ComplexMatrix density); // validates
    static constexpr double kHermTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPsdTol = -1e-9;
};

/// Local Bloch vectors and the 3x3 correlation matrix t, t[m][n] row-major
/// with m indexing the first qubit's Pauli axis and n the second's.
struct BlochForm {
    Vec3 m_a{};
    Vec3 m_b{};
    Mat3 t{};
};

/// Eigenvalues of t^T t, descending, clamped nonnegative.
struct CorrelationSpectrum {
    std::array<double, 3> lambda{};
};

BlochForm bloch_decompose(const TwoQubitState& state);
TwoQubitState bloch_compose(const BlochForm& form); // throws ValidationError if unphysical

CorrelationSpectrum correlation_spectrum(const BlochForm& form);
CorrelationSpectrum correlation_spectrum(const TwoQubitState& state);

/// Which fixed measurement family the local rotations should canonicalize
/// the correlation matrix for. The chain scenario probes the z and x columns
/// of t (middle parties measure sigma_z x sigma_z and sigma_x x sigma_x), so
/// the two largest singular values go to the z and x slots. The star
/// scenario's GHZ-basis dichotomies for n >= 3 probe the x and y columns
/// instead.
enum class AlignTarget { chain, star };

struct Alignment {
    TwoQubitState state; // correlation matrix diagonal, see AlignTarget
    Mat3 rot_a;          // proper rotation on the first qubit's Bloch space
    Mat3 rot_b;          // t_aligned = rot_a * t * rot_b^T
};

/// Rotates both qubits so the correlation matrix becomes diagonal with the
/// singular values of t placed per `target`. Signs are absorbed into the
/// rotations; when det(t) < 0 forces one negative sign it lands on the
/// smallest singular value. The correlation spectrum is unchanged.
Alignment align_state(const TwoQubitState& state, AlignTarget target = AlignTarget::chain);

/// SU(2) matrix implementing a proper rotation on Bloch vectors:
/// U (axis.sigma) U^dag = (rot*axis).sigma.
ComplexMatrix su2_from_rotation(const Mat3& rot);

/// Conjugates the state by the given single-qubit unitaries, one per side.
TwoQubitState conjugate_local(const TwoQubitState& state, const ComplexMatrix& u_a,
                              const ComplexMatrix& u_b);

/// Exchanges the two qubits.
TwoQubitState swap_parties(const TwoQubitState& state);

// ---------------------------------------------------------------------------
// Named state families.

enum class BellLabel { phi_plus, phi_minus, psi_plus, psi_minus };

TwoQubitState make_bell(BellLabel label);
/// v |bell><bell| + (1-v)/4 * identity, v in [0, 1]; base defaults to psi-.
TwoQubitState make_werner(double v, BellLabel base = BellLabel::psi_minus);
/// Normalizes the amplitudes; throws on a (near-)zero vector.
TwoQubitState make_pure(const std::array<cplx, 4>& amplitudes);

struct BellSpec {
    BellLabel label = BellLabel::phi_plus;
};
struct WernerSpec {
    double v = 0.0;
    BellLabel base = BellLabel::psi_minus;
};
struct PureSpec {
    std::array<cplx, 4> amplitudes{};
};
struct BlochSpec {
    BlochForm form;
};
struct DenseSpec {
    ComplexMatrix rho;
};

/// Tagged description of a state, the unit the CLI file format deserializes
/// into.
using StateSpec = std::variant<BellSpec, WernerSpec, PureSpec, BlochSpec, DenseSpec>;

TwoQubitState make_state(const StateSpec& spec);

const char* bell_label_name(BellLabel label);
BellLabel bell_label_from_name(const std::string& name); // throws InputError

} // namespace nlocal
