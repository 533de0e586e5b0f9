#include "cheshire/tensor.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace cheshire {

namespace {

void check_finite(const std::vector<Complex>& values, const char* what) {
    for (const Complex& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NonFiniteValueError(std::string(what) + ": non-finite component");
        }
    }
}

} // namespace

std::size_t space_dim(const Space& space) {
    std::size_t d = 1;
    for (const SpaceLabel& f : space) d *= f.dim;
    return d;
}

void validate_space(const Space& space) {
    std::unordered_set<std::string> seen;
    for (const SpaceLabel& f : space) {
        if (f.dim < 2) {
            throw PreconditionError("space factor '" + f.name + "' has dimension < 2");
        }
        if (!seen.insert(f.name).second) {
            throw DuplicateLabelError("duplicate space label '" + f.name + "'");
        }
    }
}

Ket::Ket(Space space, std::vector<Complex> amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    validate_space(space_);
    if (amps_.size() != space_dim(space_)) {
        throw DimensionMismatchError("ket length " + std::to_string(amps_.size()) +
                                     " does not match space dimension " +
                                     std::to_string(space_dim(space_)));
    }
    check_finite(amps_, "ket");
}

double Ket::norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return s;
}

double Ket::norm() const { return std::sqrt(norm_squared()); }

Ket Ket::normalized() const {
    const double n = norm();
    if (n <= 0.0) throw ZeroPostSelection("cannot normalize the zero vector");
    return scaled(Complex(1.0 / n, 0.0));
}

Ket Ket::scaled(Complex factor) const {
    std::vector<Complex> out(amps_);
    for (Complex& a : out) a *= factor;
    return Ket(space_, std::move(out));
}

Operator::Operator(Space space, std::vector<Complex> matrix)
    : space_(std::move(space)), m_(std::move(matrix)) {
    validate_space(space_);
    dim_ = space_dim(space_);
    if (m_.size() != dim_ * dim_) {
        throw DimensionMismatchError("operator storage " + std::to_string(m_.size()) +
                                     " does not match square dimension " +
                                     std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    check_finite(m_, "operator");
}

Operator Operator::identity(Space space) {
    const std::size_t d = space_dim(space);
    std::vector<Complex> m(d * d, Complex(0, 0));
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = Complex(1, 0);
    return Operator(std::move(space), std::move(m));
}

Operator Operator::adjoint() const {
    std::vector<Complex> m(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m[j * dim_ + i] = std::conj(at(i, j));
    return Operator(space_, std::move(m));
}

Operator Operator::scaled(Complex factor) const {
    std::vector<Complex> m(m_);
    for (Complex& v : m) v *= factor;
    return Operator(space_, std::move(m));
}

namespace {

void require_same_space(const Space& a, const Space& b, const char* what) {
    if (a != b) throw SpaceMismatchError(std::string(what) + ": operand spaces differ");
}

bool operator_spaces_equal(const Space& a, const Space& b) { return a == b; }

} // namespace

Operator operator+(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "operator sum");
    std::vector<Complex> m(a.m_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += b.m_[i];
    return Operator(a.space_, std::move(m));
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "operator difference");
    std::vector<Complex> m(a.m_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] -= b.m_[i];
    return Operator(a.space_, std::move(m));
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_space(a.space_, b.space_, "operator product");
    const std::size_t d = a.dim_;
    std::vector<Complex> m(d * d, Complex(0, 0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const Complex aik = a.m_[i * d + k];
            if (aik == Complex(0, 0)) continue;
            for (std::size_t j = 0; j < d; ++j) {
                m[i * d + j] += aik * b.m_[k * d + j];
            }
        }
    }
    return Operator(a.space_, std::move(m));
}

Ket make_ket(Space space, std::vector<Complex> amplitudes) {
    return Ket(std::move(space), std::move(amplitudes));
}

Operator make_operator(Space space, std::vector<Complex> rowMajor) {
    return Operator(std::move(space), std::move(rowMajor));
}

namespace {

Space concat_disjoint(const Space& a, const Space& b) {
    Space out = a;
    out.insert(out.end(), b.begin(), b.end());
    validate_space(out); // throws DuplicateLabelError on shared labels
    return out;
}

} // namespace

Ket tensor(const Ket& a, const Ket& b) {
    Space space = concat_disjoint(a.space(), b.space());
    std::vector<Complex> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    return Ket(std::move(space), std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
    Space space = concat_disjoint(a.space(), b.space());
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    const std::size_t d = da * db;
    std::vector<Complex> m(d * d);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    m[(i * db + k) * d + (j * db + l)] = a.at(i, j) * b.at(k, l);
    return Operator(std::move(space), std::move(m));
}

Complex inner(const Ket& bra, const Ket& ket) {
    if (bra.space() != ket.space()) {
        throw SpaceMismatchError("inner product: spaces differ");
    }
    Complex s(0, 0);
    for (std::size_t i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
    return s;
}

Ket apply(const Operator& op, const Ket& ket) {
    if (op.space() != ket.space()) {
        throw SpaceMismatchError("apply: operator and ket spaces differ");
    }
    const std::size_t d = op.dim();
    std::vector<Complex> out(d, Complex(0, 0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out[i] += op.at(i, j) * ket[j];
    return Ket(ket.space(), std::move(out));
}

Operator embed(const Operator& op, const Space& composite) {
    validate_space(composite);
    const Space& sub = op.space();
    if (sub.empty()) throw PreconditionError("embed: empty operator space");

    // Locate sub as a contiguous run of composite.
    std::size_t start = composite.size();
    for (std::size_t i = 0; i + sub.size() <= composite.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < sub.size(); ++k) {
            if (!(composite[i + k] == sub[k])) {
                match = false;
                break;
            }
        }
        if (match) {
            start = i;
            break;
        }
    }
    if (start == composite.size()) {
        throw LabelNotFoundError("embed: operator factors are not a contiguous run of the composite space");
    }

    Space left(composite.begin(), composite.begin() + start);
    Space right(composite.begin() + start + sub.size(), composite.end());
    Operator out = op;
    if (!left.empty()) out = tensor(Operator::identity(left), out);
    if (!right.empty()) out = tensor(out, Operator::identity(right));
    return out;
}

double max_abs_diff(const Operator& a, const Operator& b) {
    if (!operator_spaces_equal(a.space(), b.space())) {
        throw SpaceMismatchError("max_abs_diff: spaces differ");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.matrix().size(); ++i) {
        m = std::max(m, std::abs(a.matrix()[i] - b.matrix()[i]));
    }
    return m;
}

double max_abs_diff(const Ket& a, const Ket& b) {
    if (a.space() != b.space()) throw SpaceMismatchError("max_abs_diff: spaces differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool is_hermitian(const Operator& op, double tol) {
    for (std::size_t i = 0; i < op.dim(); ++i)
        for (std::size_t j = 0; j < op.dim(); ++j)
            if (std::abs(op.at(i, j) - std::conj(op.at(j, i))) > tol) return false;
    return true;
}

namespace {

void require_qubit(const SpaceLabel& label) {
    if (label.dim != 2) {
        throw PreconditionError("label '" + label.name + "' is not two-dimensional");
    }
}

} // namespace

Ket basis_ket(const SpaceLabel& label, std::size_t index) {
    if (index >= label.dim) throw PreconditionError("basis index out of range");
    std::vector<Complex> amps(label.dim, Complex(0, 0));
    amps[index] = Complex(1, 0);
    return Ket({label}, std::move(amps));
}

Operator pauli_x(const SpaceLabel& label) {
    require_qubit(label);
    return Operator({label}, {{0, 0}, {1, 0}, {1, 0}, {0, 0}});
}

Operator pauli_y(const SpaceLabel& label) {
    require_qubit(label);
    return Operator({label}, {{0, 0}, {0, -1}, {0, 1}, {0, 0}});
}

Operator pauli_z(const SpaceLabel& label) {
    require_qubit(label);
    return Operator({label}, {{1, 0}, {0, 0}, {0, 0}, {-1, 0}});
}

Operator projector(const SpaceLabel& label, std::size_t index) {
    require_qubit(label);
    if (index >= 2) throw PreconditionError("projector index out of range");
    std::vector<Complex> m(4, Complex(0, 0));
    m[index * 2 + index] = Complex(1, 0);
    return Operator({label}, std::move(m));
}

} // namespace cheshire
