#include "cheshire/fock_optics.hpp"

#include <cmath>
#include <string>

namespace cheshire::fock {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// (i,j) pairs with i <= j in basis order.
constexpr std::size_t kPairs[kBasisSize][2] = {
    {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3},
};

} // namespace

std::size_t basis_index(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    if (j >= kNumModes) {
        throw PreconditionError("mode index out of range");
    }
    for (std::size_t k = 0; k < kBasisSize; ++k) {
        if (kPairs[k][0] == i && kPairs[k][1] == j) return k;
    }
    throw PreconditionError("mode pair out of range");
}

std::pair<std::size_t, std::size_t> basis_pair(std::size_t k) {
    if (k >= kBasisSize) {
        throw PreconditionError("two-photon basis index out of range");
    }
    return {kPairs[k][0], kPairs[k][1]};
}

double TwoPhotonState::norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    return s;
}

PpbsSpec default_ppbs_spec() { return make_ppbs_spec(1.0, 1.0 / std::sqrt(3.0)); }

PpbsSpec make_ppbs_spec(double t_H, double t_V) {
    if (!(t_H >= 0.0 && t_H <= 1.0) || !(t_V >= 0.0 && t_V <= 1.0)) {
        throw PreconditionError("transmissivities must lie in [0, 1]");
    }
    return PpbsSpec{t_H, t_V, std::sqrt(1.0 - t_H * t_H), std::sqrt(1.0 - t_V * t_V)};
}

std::vector<Attenuation> standard_adjustments() {
    const double f = 1.0 / std::sqrt(3.0);
    return {{Mode::m1H, f}, {Mode::m2H, f}};
}

Space gate_space() { return {{"sysPol", 2}, {"ptrPol", 2}}; }

TwoPhotonState dual_rail_encode(const Ket& qubit_pair) {
    if (qubit_pair.space() != gate_space()) {
        throw SpaceMismatchError("dual-rail encoding expects a ket over [sysPol, ptrPol]");
    }
    if (std::abs(qubit_pair.norm() - 1.0) > 1e-12) {
        throw PreconditionError("dual-rail encoding expects a normalized input");
    }
    TwoPhotonState out;
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t t = 0; t < 2; ++t) {
            // system photon: mode 1 with polarization s; pointer photon:
            // mode 2 with polarization t
            out.amplitudes[basis_index(s, 2 + t)] = qubit_pair[s * 2 + t];
        }
    }
    out.success_norm = 1.0;
    return out;
}

TwoPhotonState ppbs_transform(const TwoPhotonState& s, const PpbsSpec& spec) {
    // c[j][p]: coefficient of mode j in the image of a creation operator on
    // mode p. Polarization is preserved; each block is [[t, r], [-r, t]].
    double c[kNumModes][kNumModes] = {};
    c[0][0] = spec.t_H;
    c[2][0] = -spec.r_H;
    c[0][2] = spec.r_H;
    c[2][2] = spec.t_H;
    c[1][1] = spec.t_V;
    c[3][1] = -spec.r_V;
    c[1][3] = spec.r_V;
    c[3][3] = spec.t_V;

    TwoPhotonState out;
    out.success_norm = s.success_norm;
    out.amplitudes.fill(Complex(0, 0));
    for (std::size_t k = 0; k < kBasisSize; ++k) {
        const Complex amp = s.amplitudes[k];
        if (amp == Complex(0, 0)) continue;
        const auto [p, q] = basis_pair(k);
        for (std::size_t i = 0; i < kNumModes; ++i) {
            for (std::size_t j = i; j < kNumModes; ++j) {
                double coeff;
                if (p != q) {
                    coeff = (i == j) ? kSqrt2 * c[i][p] * c[i][q]
                                     : c[i][p] * c[j][q] + c[j][p] * c[i][q];
                } else {
                    coeff = (i == j) ? c[i][p] * c[i][p] : kSqrt2 * c[i][p] * c[j][p];
                }
                if (coeff != 0.0) out.amplitudes[basis_index(i, j)] += amp * coeff;
            }
        }
    }
    return out;
}

TwoPhotonState attenuate(const TwoPhotonState& s, Mode mode, double factor) {
    if (!(factor >= 0.0 && factor <= 1.0)) {
        throw PreconditionError("attenuation factor must lie in [0, 1]");
    }
    const std::size_t m = static_cast<std::size_t>(mode);
    TwoPhotonState out = s;
    for (std::size_t k = 0; k < kBasisSize; ++k) {
        const auto [i, j] = basis_pair(k);
        const int count = (i == m ? 1 : 0) + (j == m ? 1 : 0);
        for (int c = 0; c < count; ++c) out.amplitudes[k] *= factor;
    }
    out.success_norm = out.norm_squared();
    return out;
}

TwoPhotonState attenuate(const TwoPhotonState& s, const std::vector<Attenuation>& adjustments) {
    TwoPhotonState out = s;
    for (const Attenuation& a : adjustments) out = attenuate(out, a.mode, a.factor);
    return out;
}

CoincidenceResult coincidence_project(const TwoPhotonState& s) {
    std::vector<Complex> amps(4, Complex(0, 0));
    double p = 0.0;
    for (std::size_t sys = 0; sys < 2; ++sys) {
        for (std::size_t ptr = 0; ptr < 2; ++ptr) {
            const Complex a = s.amplitudes[basis_index(sys, 2 + ptr)];
            amps[sys * 2 + ptr] = a;
            p += std::norm(a);
        }
    }
    if (p == 0.0) {
        return CoincidenceResult{std::nullopt, 0.0};
    }
    return CoincidenceResult{make_ket(gate_space(), std::move(amps)), p};
}

Operator conditional_gate_matrix(const PpbsSpec& spec,
                                 const std::vector<Attenuation>& adjustments) {
    const Space space = gate_space();
    std::vector<Complex> m(16, Complex(0, 0));
    for (std::size_t col = 0; col < 4; ++col) {
        std::vector<Complex> in(4, Complex(0, 0));
        in[col] = Complex(1, 0);
        TwoPhotonState s = dual_rail_encode(make_ket(space, std::move(in)));
        s = attenuate(ppbs_transform(s, spec), adjustments);
        const CoincidenceResult r = coincidence_project(s);
        if (r.state) {
            for (std::size_t row = 0; row < 4; ++row) m[row * 4 + col] = (*r.state)[row];
        }
    }
    return make_operator(space, std::move(m));
}

double certified_cz_scalar(const PpbsSpec& spec, const std::vector<Attenuation>& adjustments) {
    const Operator m = conditional_gate_matrix(spec, adjustments);
    const double s = m.at(0, 0).real();
    const double signs[4] = {1.0, 1.0, 1.0, -1.0};
    double dev = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex want = (i == j) ? Complex(signs[i] * s, 0) : Complex(0, 0);
            dev = std::max(dev, std::abs(m.at(i, j) - want));
        }
    }
    if (s <= 0.0 || dev > 1e-12) {
        throw RuntimeFailure("conditional gate is not a positively scaled controlled-Z (deviation " +
                             std::to_string(dev) + ")");
    }
    return s;
}

double certified_cz_scalar() {
    return certified_cz_scalar(default_ppbs_spec(), standard_adjustments());
}

} // namespace cheshire::fock
