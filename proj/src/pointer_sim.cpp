#include "cheshire/pointer_sim.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace cheshire::pointer {

void validate_pointer_spec(const PointerSpec& spec, const Space& system) {
    if (spec.label.dim != 2) {
        throw PreconditionError("pointer label '" + spec.label.name + "' is not two-dimensional");
    }
    if (!std::isfinite(spec.g)) {
        throw NonFiniteValueError("pointer strength is not finite");
    }
    if (spec.observable.space() != system) {
        throw SpaceMismatchError("pointer observable is not defined on the system space");
    }
    if (!is_hermitian(spec.observable)) {
        throw NonHermitianError("pointer observable is not Hermitian");
    }
    const Operator& a = spec.observable;
    if (max_abs_diff(a * a * a, a) > 1e-12) {
        throw PreconditionError("pointer observable must have eigenvalues in {-1, 0, 1}");
    }
}

Operator coupling_unitary(const PointerSpec& spec, const Space& full) {
    const Operator g_op = embed(spec.observable, full) * embed(pauli_y(spec.label), full);
    // g_op is Hermitian with g_op^3 = g_op (A^3 = A and sigma_y^2 = I), so
    // its spectral projectors are polynomials in it.
    const Operator id = Operator::identity(full);
    const Operator g2 = g_op * g_op;
    const Operator q_plus = (g2 + g_op).scaled(Complex(0.5, 0));
    const Operator q_minus = (g2 - g_op).scaled(Complex(0.5, 0));
    const Operator q_zero = id - g2;
    const double theta = spec.g / 2.0;
    const Complex em(std::cos(theta), -std::sin(theta));
    const Complex ep(std::cos(theta), std::sin(theta));
    return q_zero + q_plus.scaled(em) + q_minus.scaled(ep);
}

CoupledRun couple_and_postselect(const qcc::PrePost& pp,
                                 const std::vector<PointerSpec>& pointers) {
    const Space& system = pp.pre.space();
    std::unordered_set<std::string> seen;
    for (const PointerSpec& spec : pointers) {
        validate_pointer_spec(spec, system);
        if (!seen.insert(spec.label.name).second) {
            throw DuplicateLabelError("duplicate pointer label '" + spec.label.name + "'");
        }
    }

    Space pointer_space;
    Ket state = pp.pre;
    for (const PointerSpec& spec : pointers) {
        pointer_space.push_back(spec.label);
        state = tensor(state, basis_ket(spec.label, 0)); // pointer prepared in |H>
    }
    const Space full = state.space(); // also rejects pointer labels clashing with system labels

    for (const PointerSpec& spec : pointers) {
        state = apply(coupling_unitary(spec, full), state);
    }

    // Project the system factors (slowest indices) onto <post|.
    const std::size_t dim_sys = pp.post.dim();
    const std::size_t dim_ptr = state.dim() / dim_sys;
    std::vector<Complex> chi(dim_ptr, Complex(0, 0));
    for (std::size_t s = 0; s < dim_sys; ++s) {
        const Complex c = std::conj(pp.post[s]);
        if (c == Complex(0, 0)) continue;
        for (std::size_t p = 0; p < dim_ptr; ++p) {
            chi[p] += c * state[s * dim_ptr + p];
        }
    }
    Ket pointer_state = make_ket(pointer_space, std::move(chi));
    const double ps = pointer_state.norm_squared();
    return CoupledRun{std::move(pointer_state), ps};
}

PointerReadout pointer_readout(const Ket& joint, double ps_prob, const SpaceLabel& which) {
    if (ps_prob <= 0.0) {
        throw ZeroPostSelection("post-selection retained no amplitude; pointer readout undefined");
    }
    const Space& space = joint.space();
    const double n2 = joint.norm_squared();
    if (n2 <= 0.0) {
        throw ZeroPostSelection("pointer state has zero norm; readout undefined");
    }
    auto expectation = [&](const Operator& pauli) {
        const Ket moved = apply(embed(pauli, space), joint);
        return inner(joint, moved).real() / n2;
    };
    PointerReadout r;
    r.sx = expectation(pauli_x(which));
    r.sy = expectation(pauli_y(which));
    r.sz = expectation(pauli_z(which));
    r.ps_prob = ps_prob;
    return r;
}

PointerReadout pointer_readout(const CoupledRun& run, const SpaceLabel& which) {
    return pointer_readout(run.pointer_state, run.ps_prob, which);
}

Complex first_order_estimate(const PointerReadout& r, double g) {
    if (g == 0.0) {
        throw PreconditionError("first-order estimate requires a nonzero coupling strength");
    }
    return Complex(r.sx / g, r.sy / g);
}

double exact_projector_readout(Complex a_w, double g) {
    const double theta = g / 2.0;
    const Complex alpha = (Complex(1, 0) - a_w) + a_w * std::cos(theta);
    const Complex beta = a_w * std::sin(theta);
    const double denom = std::norm(alpha) + std::norm(beta);
    if (denom <= 1e-30) {
        throw ZeroPostSelection("fully destructive post-selection at this strength");
    }
    return 2.0 * (std::conj(alpha) * beta).real() / denom;
}

} // namespace cheshire::pointer
