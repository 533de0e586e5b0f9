#ifndef CHESHIRE_POINTER_SIM_HPP
#define CHESHIRE_POINTER_SIM_HPP

#include <vector>

#include "cheshire/tensor.hpp"
#include "cheshire/weak_values.hpp"

// Exact von Neumann pointer couplings with qubit pointers prepared in |H>.
// Each pointer k couples through U_k = exp(-i g_k A_k (x) sigma_y / 2); the
// unitaries are applied in list order to |pre> (x) |H...H>, then the system
// factors are projected onto <post|. All exponentials are exact: the
// generator G = A (x) sigma_y satisfies G^3 = G whenever A does, so
// exp(-i theta G) = Q0 + e^{-i theta} Q+ + e^{+i theta} Q- with polynomial
// spectral projectors.

namespace cheshire::pointer {

struct PointerSpec {
    SpaceLabel label;    // dim-2 pointer factor, distinct per pointer
    Operator observable; // Hermitian on the system space, eigenvalues in {-1,0,1}
    double g = 0.0;      // coupling strength in radians
};

struct PointerReadout {
    double sx = 0.0;
    double sy = 0.0;
    double sz = 1.0;
    double ps_prob = 0.0;
};

struct CoupledRun {
    Ket pointer_state; // unnormalized, over the pointer labels only
    double ps_prob;    // squared norm of pointer_state
};

// Hermitian (1e-12) and A^3 = A (1e-12, i.e. eigenvalues in {-1,0,1});
// label must be two-dimensional. Throws PreconditionError subclasses.
void validate_pointer_spec(const PointerSpec& spec, const Space& system);

// exp(-i g/2 A (x) sigma_y) on system (x) pointer factors of `full`.
// Exposed so tests can check unitarity and compare against a series oracle.
Operator coupling_unitary(const PointerSpec& spec, const Space& full);

// Applies all couplings in order and projects onto <post|. With no pointers
// this reduces to the bare post-selection (ps_prob = |<post|pre>|^2).
CoupledRun couple_and_postselect(const qcc::PrePost& pp,
                                 const std::vector<PointerSpec>& pointers);

// Normalized sigma_x/sigma_y/sigma_z expectations of one pointer, the others
// summed over. Throws ZeroPostSelection when ps_prob <= 0.
PointerReadout pointer_readout(const Ket& joint, double ps_prob, const SpaceLabel& which);

PointerReadout pointer_readout(const CoupledRun& run, const SpaceLabel& which);

// Lowest-order weak-value estimate (sx/g) + i (sy/g). Throws on g = 0.
Complex first_order_estimate(const PointerReadout& r, double g);

// Closed-form conditional <sigma_x> for a single pointer coupled to a
// projector with weak value a_w: alpha = (1 - a_w) + a_w cos(g/2),
// beta = a_w sin(g/2), sx = 2 Re(conj(alpha) beta) / (|alpha|^2 + |beta|^2).
// Independent oracle for couple_and_postselect. Throws ZeroPostSelection
// when the denominator vanishes (fully destructive post-selection).
double exact_projector_readout(Complex a_w, double g);

} // namespace cheshire::pointer

#endif
