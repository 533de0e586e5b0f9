#ifndef CHESHIRE_TESTS_TEST_RNG_HPP
#define CHESHIRE_TESTS_TEST_RNG_HPP

#include <cstdint>
#include <vector>

#include "cheshire/tensor.hpp"

// Deterministic generators for test inputs. Same mixing constants as the
// library sampler, but a private copy: test inputs must not shift when the
// library RNG changes.

namespace testutil {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // symmetric around zero, |x| <= 1
    double sym() { return 2.0 * unit() - 1.0; }
};

inline std::vector<cheshire::Complex> random_amplitudes(Rng& rng, std::size_t dim) {
    std::vector<cheshire::Complex> a(dim);
    for (auto& z : a) {
        z = {rng.sym(), rng.sym()};
    }
    return a;
}

inline cheshire::Ket random_unit_ket(Rng& rng, const cheshire::Space& space) {
    return cheshire::make_ket(space, random_amplitudes(rng, cheshire::space_dim(space)))
        .normalized();
}

inline cheshire::Operator random_hermitian(Rng& rng, const cheshire::Space& space) {
    const std::size_t d = cheshire::space_dim(space);
    const cheshire::Operator m = cheshire::make_operator(space, random_amplitudes(rng, d * d));
    return (m + m.adjoint()).scaled(0.5);
}

// Rank-1 projector |v><v| onto a random unit vector.
inline cheshire::Operator random_rank1_projector(Rng& rng, const cheshire::Space& space) {
    const cheshire::Ket v = random_unit_ket(rng, space);
    const std::size_t d = v.dim();
    std::vector<cheshire::Complex> m(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            m[r * d + c] = v[r] * std::conj(v[c]);
        }
    }
    return cheshire::make_operator(space, std::move(m));
}

} // namespace testutil

#endif
