#ifndef CHESHIRE_TESTS_ORACLES_HPP
#define CHESHIRE_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Independent reference implementations used to cross-check the library:
//  - a series matrix exponential (scaling and squaring) for pointer
//    couplings, against the library's closed-form spectral construction;
//  - a distinguishable-photon tensor-square for the two-photon beam
//    splitter, against the library's per-column bosonic rules;
//  - long-double normal-equations least squares, against the library's QR.
// They share no code with the library beyond std::complex.

namespace oracle {

using Complex = std::complex<double>;
using Mat = std::vector<std::vector<Complex>>;
using Vec = std::vector<Complex>;

inline Mat zeros(std::size_t n) { return Mat(n, std::vector<Complex>(n, Complex(0.0, 0.0))); }

inline Mat eye(std::size_t n) {
    Mat m = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size();
    Mat c = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a[i][k];
            if (aik == Complex(0.0, 0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    return c;
}

inline Mat kron(const Mat& a, const Mat& b) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    Mat c = zeros(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    c[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return c;
}

inline Vec matvec(const Mat& a, const Vec& x) {
    const std::size_t n = a.size();
    Vec y(n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            y[i] += a[i][j] * x[j];
        }
    }
    return y;
}

inline double one_norm(const Mat& a) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            col += std::abs(a[i][j]);
        }
        best = std::max(best, col);
    }
    return best;
}

inline Mat scaled(Mat a, Complex f) {
    for (auto& row : a) {
        for (auto& v : row) {
            v *= f;
        }
    }
    return a;
}

// exp(K) by scaling and squaring with a Taylor series on the scaled matrix.
inline Mat expm(Mat k) {
    const std::size_t n = k.size();
    int squarings = 0;
    double norm = one_norm(k);
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    k = scaled(std::move(k), Complex(std::ldexp(1.0, -squarings), 0.0));
    Mat result = eye(n);
    Mat term = eye(n);
    for (int j = 1; j <= 48; ++j) {
        term = mul(term, k);
        term = scaled(std::move(term), Complex(1.0 / j, 0.0));
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                result[r][c] += term[r][c];
            }
        }
        if (one_norm(term) < 1e-22) {
            break;
        }
    }
    for (int s = 0; s < squarings; ++s) {
        result = mul(result, result);
    }
    return result;
}

// ---- pointer couplings --------------------------------------------------

struct CoupledOracle {
    Vec joint; // pointer register amplitudes, unnormalized
    double ps; // squared norm
};

// Reference for couple-then-postselect: the state is pre (x) |0...0>, each
// coupling applies exp(-i g/2 A (x) sigma_y^(k)) via the series exponential,
// and the system factor is projected onto post. Pointer k of n sits at
// bit position (n-1-k) from the least significant side, i.e. pointers are
// appended left-to-right after the system factor.
inline CoupledOracle coupled_run(const Vec& pre, const Vec& post,
                                 const std::vector<Mat>& observables,
                                 const std::vector<double>& gs) {
    const std::size_t sys = pre.size();
    const std::size_t n = observables.size();
    const std::size_t ptr_dim = std::size_t{1} << n;
    const Complex i01(0.0, 1.0);
    const Mat sy = {{Complex(0.0, 0.0), -i01}, {i01, Complex(0.0, 0.0)}};

    Vec state(sys * ptr_dim, Complex(0.0, 0.0));
    for (std::size_t s = 0; s < sys; ++s) {
        state[s * ptr_dim] = pre[s];
    }
    for (std::size_t k = 0; k < n; ++k) {
        Mat reg = eye(1);
        for (std::size_t j = 0; j < n; ++j) {
            reg = kron(reg, j == k ? sy : eye(2));
        }
        const Mat gen = kron(observables[k], reg);
        const Mat u = expm(scaled(gen, Complex(0.0, -gs[k] / 2.0)));
        state = matvec(u, state);
    }
    Vec chi(ptr_dim, Complex(0.0, 0.0));
    for (std::size_t s = 0; s < sys; ++s) {
        for (std::size_t p = 0; p < ptr_dim; ++p) {
            chi[p] += std::conj(post[s]) * state[s * ptr_dim + p];
        }
    }
    double ps = 0.0;
    for (const Complex& c : chi) {
        ps += std::norm(c);
    }
    return {chi, ps};
}

// <sigma_axis^(k)> on pointer k of n, over an unnormalized register state.
inline double pauli_exp(const Vec& chi, std::size_t n, std::size_t k, char axis) {
    const Complex i01(0.0, 1.0);
    Mat op;
    switch (axis) {
    case 'x':
        op = {{Complex(0.0, 0.0), Complex(1.0, 0.0)}, {Complex(1.0, 0.0), Complex(0.0, 0.0)}};
        break;
    case 'y':
        op = {{Complex(0.0, 0.0), -i01}, {i01, Complex(0.0, 0.0)}};
        break;
    default:
        op = {{Complex(1.0, 0.0), Complex(0.0, 0.0)}, {Complex(0.0, 0.0), Complex(-1.0, 0.0)}};
        break;
    }
    Mat x_reg = eye(1);
    for (std::size_t j = 0; j < n; ++j) {
        x_reg = kron(x_reg, j == k ? op : eye(2));
    }
    const Vec xchi = matvec(x_reg, chi);
    Complex num(0.0, 0.0);
    double den = 0.0;
    for (std::size_t p = 0; p < chi.size(); ++p) {
        num += std::conj(chi[p]) * xchi[p];
        den += std::norm(chi[p]);
    }
    if (den <= 0.0) {
        throw std::runtime_error("oracle: zero post-selected state");
    }
    return num.real() / den;
}

inline double sx_of(const Vec& chi, std::size_t n, std::size_t k) {
    return pauli_exp(chi, n, k, 'x');
}

// ---- two-photon optics ---------------------------------------------------

// Single-photon matrix of the partially polarizing splitter on modes
// (1H, 1V, 2H, 2V), with per-mode attenuation factors composed after it.
inline Mat ppbs_single_photon(double t_h, double t_v, const std::array<double, 4>& att) {
    const double r_h = std::sqrt(1.0 - t_h * t_h);
    const double r_v = std::sqrt(1.0 - t_v * t_v);
    Mat c = zeros(4);
    c[0][0] = t_h;
    c[0][2] = r_h;
    c[2][0] = -r_h;
    c[2][2] = t_h;
    c[1][1] = t_v;
    c[1][3] = r_v;
    c[3][1] = -r_v;
    c[3][3] = t_v;
    for (std::size_t row = 0; row < 4; ++row) {
        for (std::size_t col = 0; col < 4; ++col) {
            c[row][col] *= att[row];
        }
    }
    return c;
}

// Two-photon amplitudes over the symmetric pair basis, computed in the full
// 16-dimensional distinguishable-photon space: symmetrize the input pair,
// apply M (x) M, read back the symmetric components.
//
// pairs must list the 10 unordered mode pairs in the caller's basis order.
inline std::array<Complex, 10> tensor_square_amps(
    const Mat& m, int p, int q, const std::array<std::pair<int, int>, 10>& pairs) {
    Vec in(16, Complex(0.0, 0.0));
    if (p == q) {
        in[static_cast<std::size_t>(p) * 4 + q] = 1.0;
    } else {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        in[static_cast<std::size_t>(p) * 4 + q] = inv_sqrt2;
        in[static_cast<std::size_t>(q) * 4 + p] = inv_sqrt2;
    }
    const Vec out = matvec(kron(m, m), in);
    std::array<Complex, 10> amps{};
    for (std::size_t b = 0; b < 10; ++b) {
        const auto [i, j] = pairs[b];
        if (i == j) {
            amps[b] = out[static_cast<std::size_t>(i) * 4 + j];
        } else {
            amps[b] = (out[static_cast<std::size_t>(i) * 4 + j] +
                       out[static_cast<std::size_t>(j) * 4 + i]) /
                      std::sqrt(2.0);
        }
    }
    return amps;
}

// ---- least squares --------------------------------------------------------

struct WlsResult {
    std::vector<double> coef;
    std::vector<std::vector<double>> cov;
};

// Normal-equations weighted least squares in long double, with Gauss-Jordan
// inversion. weights w_i multiply the rows (w = 1/stderr); pass all-ones and
// sigma_scaled = true for the unweighted residual-variance convention.
inline WlsResult wls_normal_equations(const std::vector<double>& g, const std::vector<double>& y,
                                      const std::vector<double>& w, int degree,
                                      bool zero_intercept, bool sigma_scaled) {
    const std::size_t rows = g.size();
    const std::size_t cols = static_cast<std::size_t>(degree) + (zero_intercept ? 0 : 1);
    std::vector<std::vector<long double>> x(rows, std::vector<long double>(cols, 0.0L));
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t c = 0;
        if (!zero_intercept) {
            x[r][c++] = w[r];
        }
        long double p = 1.0L;
        for (int d = 1; d <= degree; ++d) {
            p *= g[r];
            x[r][c++] = w[r] * p;
        }
    }
    std::vector<long double> yw(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        yw[r] = w[r] * static_cast<long double>(y[r]);
    }

    // gram = X^T X, rhs = X^T y
    std::vector<std::vector<long double>> gram(cols, std::vector<long double>(cols, 0.0L));
    std::vector<long double> rhs(cols, 0.0L);
    for (std::size_t a = 0; a < cols; ++a) {
        for (std::size_t b = 0; b < cols; ++b) {
            for (std::size_t r = 0; r < rows; ++r) {
                gram[a][b] += x[r][a] * x[r][b];
            }
        }
        for (std::size_t r = 0; r < rows; ++r) {
            rhs[a] += x[r][a] * yw[r];
        }
    }

    // Gauss-Jordan inverse with partial pivoting.
    std::vector<std::vector<long double>> aug(cols, std::vector<long double>(2 * cols, 0.0L));
    for (std::size_t r = 0; r < cols; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            aug[r][c] = gram[r][c];
        }
        aug[r][cols + r] = 1.0L;
    }
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < cols; ++r) {
            if (std::fabs(static_cast<double>(aug[r][col])) >
                std::fabs(static_cast<double>(aug[piv][col]))) {
                piv = r;
            }
        }
        if (aug[piv][col] == 0.0L) {
            throw std::runtime_error("oracle: singular gram matrix");
        }
        std::swap(aug[piv], aug[col]);
        const long double d = aug[col][col];
        for (std::size_t c = 0; c < 2 * cols; ++c) {
            aug[col][c] /= d;
        }
        for (std::size_t r = 0; r < cols; ++r) {
            if (r == col) {
                continue;
            }
            const long double f = aug[r][col];
            for (std::size_t c = 0; c < 2 * cols; ++c) {
                aug[r][c] -= f * aug[col][c];
            }
        }
    }
    std::vector<std::vector<long double>> inv(cols, std::vector<long double>(cols, 0.0L));
    for (std::size_t r = 0; r < cols; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            inv[r][c] = aug[r][cols + c];
        }
    }

    std::vector<long double> coef(cols, 0.0L);
    for (std::size_t r = 0; r < cols; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            coef[r] += inv[r][c] * rhs[c];
        }
    }

    long double scale = 1.0L;
    if (sigma_scaled) {
        long double rss = 0.0L;
        for (std::size_t r = 0; r < rows; ++r) {
            long double fit = 0.0L;
            for (std::size_t c = 0; c < cols; ++c) {
                fit += x[r][c] * coef[c];
            }
            const long double resid = yw[r] - fit;
            rss += resid * resid;
        }
        if (rows > cols) {
            scale = rss / static_cast<long double>(rows - cols);
        } else {
            scale = 0.0L;
        }
    }

    WlsResult out;
    out.coef.resize(cols);
    out.cov.assign(cols, std::vector<double>(cols, 0.0));
    for (std::size_t r = 0; r < cols; ++r) {
        out.coef[r] = static_cast<double>(coef[r]);
        for (std::size_t c = 0; c < cols; ++c) {
            out.cov[r][c] = static_cast<double>(scale * inv[r][c]);
        }
    }
    return out;
}

} // namespace oracle

#endif
