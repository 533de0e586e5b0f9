#ifndef CHESHIRE_FOCK_OPTICS_HPP
#define CHESHIRE_FOCK_OPTICS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cheshire/tensor.hpp"

// Two photons in four optical modes (1H, 1V, 2H, 2V): the nondeterministic
// partially-polarizing-beam-splitter realization of a controlled-Z gate with
// coincidence post-selection. Amplitudes live on the 10-element symmetric
// two-photon Fock basis; attenuation is sub-unitary scaling with the
// retained squared norm tracked in success_norm.

namespace cheshire::fock {

enum class Mode : std::size_t { m1H = 0, m1V = 1, m2H = 2, m2V = 3 };

inline constexpr std::size_t kNumModes = 4;
inline constexpr std::size_t kBasisSize = 10;

// Basis order: mode pairs (i,j) with i <= j, lexicographic —
// (0,0),(0,1),(0,2),(0,3),(1,1),(1,2),(1,3),(2,2),(2,3),(3,3).
// i == j is the doubly-occupied state |2_i>.
std::size_t basis_index(std::size_t i, std::size_t j);
std::pair<std::size_t, std::size_t> basis_pair(std::size_t k);

struct TwoPhotonState {
    std::array<Complex, kBasisSize> amplitudes{};
    double success_norm = 1.0; // squared norm retained since encoding
    double norm_squared() const;
};

// t_H/t_V are amplitude transmissivities of the H/V polarization blocks;
// each block mixes its two spatial modes via [[t, r], [-r, t]] with
// r = sqrt(1 - t^2), so the transform is lossless by construction.
struct PpbsSpec {
    double t_H;
    double t_V;
    double r_H;
    double r_V;
};

// t_H = 1 (H untouched), t_V = 1/sqrt(3) — the CZ working point.
PpbsSpec default_ppbs_spec();
// Validates 0 <= t <= 1 and fills in the reflectivities.
PpbsSpec make_ppbs_spec(double t_H, double t_V);

struct Attenuation {
    Mode mode;
    double factor; // in [0, 1]
};

// The 1/sqrt(3) filters on 1H and 2H that balance the PPBS output.
std::vector<Attenuation> standard_adjustments();

// The qubit pair the gate acts on: system polarization (x) pointer
// polarization, space [sysPol:2, ptrPol:2].
Space gate_space();

// |x>|y> -> one photon in spatial mode 1 with polarization x, one in mode 2
// with polarization y. Input must be normalized (1e-12) over gate_space().
TwoPhotonState dual_rail_encode(const Ket& qubit_pair);

// Creation operators transform within each polarization block; two-photon
// amplitudes follow as the symmetric tensor square. Norm-preserving.
TwoPhotonState ppbs_transform(const TwoPhotonState& s, const PpbsSpec& spec);

// Multiplies each amplitude by factor^(photon count in mode); success_norm
// becomes the new squared norm. Equivalent to a beam splitter into a
// discarded mode followed by zero-loss post-selection.
TwoPhotonState attenuate(const TwoPhotonState& s, Mode mode, double factor);
TwoPhotonState attenuate(const TwoPhotonState& s, const std::vector<Attenuation>& adjustments);

struct CoincidenceResult {
    // Unnormalized conditioned qubit pair over gate_space(); absent when the
    // coincidence amplitude is identically zero.
    std::optional<Ket> state;
    double probability; // squared retained norm relative to the encoded input
};

// Keeps only the four one-photon-per-spatial-mode basis states and decodes
// them back to a qubit pair.
CoincidenceResult coincidence_project(const TwoPhotonState& s);

// Composes encode -> ppbs -> attenuate -> coincidence over the four basis
// inputs: the conditional map on gate_space(). For the default spec and
// standard adjustments this is (1/3) diag(1, 1, 1, -1).
Operator conditional_gate_matrix(const PpbsSpec& spec,
                                 const std::vector<Attenuation>& adjustments);

// Verifies that the conditional map is proportional to diag(1,1,1,-1) within
// 1e-12 and returns the positive scalar (1/3 at the working point). Throws
// RuntimeFailure if the map is not a scaled controlled-Z.
double certified_cz_scalar(const PpbsSpec& spec, const std::vector<Attenuation>& adjustments);
double certified_cz_scalar();

} // namespace cheshire::fock

#endif
