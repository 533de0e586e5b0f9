#ifndef CHESHIRE_TENSOR_HPP
#define CHESHIRE_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "cheshire/errors.hpp"

// Dense complex linear algebra over small tensor-product Hilbert spaces with
// labeled factors. Basis ordering is row-major over the factor list: the
// leftmost factor is the slowest index. Every composite space in this
// project has dimension <= 64, so dense storage is used throughout.
//
// Kets and Operators are immutable after construction; all operations are
// pure functions and safe to share across threads.

namespace cheshire {

using Complex = std::complex<double>;

struct SpaceLabel {
    std::string name;
    std::size_t dim = 2;

    friend bool operator==(const SpaceLabel& a, const SpaceLabel& b) {
        return a.name == b.name && a.dim == b.dim;
    }
};

using Space = std::vector<SpaceLabel>;

// Product of factor dimensions.
std::size_t space_dim(const Space& space);

// Throws DuplicateLabelError / PreconditionError on repeated names or dims < 2.
void validate_space(const Space& space);

class Ket {
public:
    // Does not normalize; post-selection and attenuation work with
    // unnormalized amplitudes. Throws on dimension mismatch or non-finite
    // amplitudes.
    Ket(Space space, std::vector<Complex> amplitudes);

    const Space& space() const { return space_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    std::size_t dim() const { return amps_.size(); }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const;
    double norm() const;
    Ket normalized() const; // throws ZeroPostSelection on the zero vector
    Ket scaled(Complex factor) const;

private:
    Space space_;
    std::vector<Complex> amps_;
};

class Operator {
public:
    // matrix is row-major, square, side = space_dim(space).
    Operator(Space space, std::vector<Complex> matrix);

    static Operator identity(Space space);

    const Space& space() const { return space_; }
    std::size_t dim() const { return dim_; }
    Complex at(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }
    const std::vector<Complex>& matrix() const { return m_; }

    Operator adjoint() const;
    Operator scaled(Complex factor) const;

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b); // composition

private:
    Space space_;
    std::size_t dim_ = 0;
    std::vector<Complex> m_;
};

Ket make_ket(Space space, std::vector<Complex> amplitudes);
Operator make_operator(Space space, std::vector<Complex> rowMajor);

// Kronecker products; result space = concat(a.space, b.space).
// Throws DuplicateLabelError if the operands share a label.
Ket tensor(const Ket& a, const Ket& b);
Operator tensor(const Operator& a, const Operator& b);

// <bra|ket>, conjugate-linear in the first argument. Spaces must match.
Complex inner(const Ket& bra, const Ket& ket);

Ket apply(const Operator& op, const Ket& ket);

// Lifts op into the composite space, acting as the identity on every factor
// not covered by op. The operator's own labels must appear as a contiguous
// run inside composite.
Operator embed(const Operator& op, const Space& composite);

// Max |a_ij - b_ij|; operators must share a space.
double max_abs_diff(const Operator& a, const Operator& b);
double max_abs_diff(const Ket& a, const Ket& b);

bool is_hermitian(const Operator& op, double tol = 1e-12);

// Qubit building blocks on a dim-2 label.
Ket basis_ket(const SpaceLabel& label, std::size_t index);
Operator pauli_x(const SpaceLabel& label);
Operator pauli_y(const SpaceLabel& label);
Operator pauli_z(const SpaceLabel& label);
// |index><index| on a dim-2 label.
Operator projector(const SpaceLabel& label, std::size_t index);

} // namespace cheshire

#endif
