// Integer 3x3 matrices with one real eigenvalue above 1 and a complex pair,
// and the derived mapping-torus data (t0, p, conjugating matrix P, lattice).
#pragma once

#include <gktorus/matrix.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gktorus {

struct NotAdmissibleError : std::runtime_error {
    explicit NotAdmissibleError(const std::string& reason) : std::runtime_error(reason) {}
};

/// Result of the spectral test on an integer matrix.
struct SpectrumClassification {
    bool admissible = false;
    std::string reason;  // set when not admissible
    std::int64_t m = 0;  // trace
    std::int64_t n = 0;  // second elementary symmetric function
    BigInt discriminant;
    double alpha = 0.0;
    std::complex<double> beta;
};

/// Concrete mapping-torus data for an admissible matrix.
struct InoueData {
    QMatrix a = QMatrix::identity(3);
    std::int64_t m = 0;
    std::int64_t n = 0;
    double alpha = 0.0;
    std::complex<double> beta;
    double t0 = 0.0;
    double p = 0.0;
    DMatrix conjugator = DMatrix(3, 3, 0.0);  // P with P A = rho(t0) P
    double residual = 0.0;                    // max-norm defect of that identity
    double condition = 0.0;                   // ||P|| * ||P^-1|| in max norm
};

namespace detail {

inline double cubic(double m, double n, double x) {
    return ((x - m) * x + n) * x - 1.0;
}

inline double cubic_deriv(double m, double n, double x) {
    return (3.0 * x - 2.0 * m) * x + n;
}

/// Real root of x^3 - m x^2 + n x - 1 in (1, inf); requires n < m so the
/// cubic is negative at 1. Bisection to certify, Newton to polish.
inline double real_root_above_one(std::int64_t m, std::int64_t n) {
    double md = static_cast<double>(m);
    double nd = static_cast<double>(n);
    double lo = 1.0;
    double hi = 1.0 + std::max({std::fabs(md), std::fabs(nd), 1.0});
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        double mid = 0.5 * (lo + hi);
        if (cubic(md, nd, mid) < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        double f = cubic(md, nd, x);
        double df = cubic_deriv(md, nd, x);
        if (df != 0.0) x -= f / df;
    }
    return x;
}

inline std::array<std::complex<double>, 3> complex_cross(
    const std::array<std::complex<double>, 3>& a, const std::array<std::complex<double>, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double cnorm(const std::array<std::complex<double>, 3>& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

/// Kernel direction of a singular 3x3 complex matrix of rank 2: the cross
/// product of the two most independent rows.
inline std::array<std::complex<double>, 3> kernel_direction(
    const std::array<std::array<std::complex<double>, 3>, 3>& rows) {
    std::array<std::complex<double>, 3> best{};
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            auto c = complex_cross(rows[i], rows[j]);
            double nn = cnorm(c);
            if (nn > best_norm) {
                best_norm = nn;
                best = c;
            }
        }
    }
    return best;
}

inline DMatrix dmat3_inverse(const DMatrix& m) {
    double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                 m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                 m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    if (det == 0.0) throw std::domain_error("singular conjugating matrix");
    DMatrix r(3, 3, 0.0);
    r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
    r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
    r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
    r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
    r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
    r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
    r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
    r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
    r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
    return r;
}

}  // namespace detail

/// Decide whether an integer matrix has the required spectrum: determinant 1,
/// one real eigenvalue alpha > 1, one complex-conjugate pair. Everything up
/// to the root values is decided in exact integer arithmetic.
inline SpectrumClassification classify_spectrum(const QMatrix& a) {
    SpectrumClassification r;
    if (a.rows() != 3 || a.cols() != 3) {
        r.reason = "matrix must be 3x3";
        return r;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (!is_integer(a(i, j))) {
                r.reason = "matrix entries must be integers";
                return r;
            }
        }
    }
    Rational d = det(a);
    if (d != 1) {
        r.reason = "determinant is " + to_string(d) + ", not 1";
        return r;
    }
    Rational tr = a(0, 0) + a(1, 1) + a(2, 2);
    Rational e2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                  a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    BigInt m = numerator(tr);
    BigInt n = numerator(e2);
    r.m = static_cast<std::int64_t>(m);
    r.n = static_cast<std::int64_t>(n);
    // discriminant of x^3 - m x^2 + n x - 1
    r.discriminant = 18 * m * n - 4 * m * m * m + m * m * n * n - 4 * n * n * n - 27;
    if (r.discriminant == 0) {
        r.reason = (m == n) ? "repeated eigenvalue 1" : "repeated real eigenvalue";
        return r;
    }
    if (r.discriminant > 0) {
        r.reason = "three real eigenvalues, no complex pair";
        return r;
    }
    if (m <= n) {
        // cubic is nonnegative at 1, so its only real root lies at or below 1
        r.reason = "real eigenvalue does not exceed 1";
        return r;
    }
    r.admissible = true;
    r.alpha = detail::real_root_above_one(r.m, r.n);
    // deflated quadratic x^2 + b x + c with b = alpha - m, c = alpha^2 - m alpha + n
    double b = r.alpha - static_cast<double>(r.m);
    double c = (r.alpha - static_cast<double>(r.m)) * r.alpha + static_cast<double>(r.n);
    double disc = 4.0 * c - b * b;  // positive: complex pair
    r.beta = {-b / 2.0, std::sqrt(std::max(disc, 0.0)) / 2.0};
    return r;
}

/// One-parameter group value: block diag(e^t, e^{-t/2} rotation(t p)).
inline DMatrix rho_at(double p, double t) {
    DMatrix r(3, 3, 0.0);
    r(0, 0) = std::exp(t);
    double s = std::exp(-t / 2.0);
    r(1, 1) = s * std::cos(t * p);
    r(1, 2) = s * std::sin(t * p);
    r(2, 1) = -s * std::sin(t * p);
    r(2, 2) = s * std::cos(t * p);
    return r;
}

/// Build (t0, p, P) for an admissible matrix so that P A = rho(t0) P.
/// P rows: left eigenvector of alpha, then real and imaginary parts of the
/// left eigenvector of conj(beta); each normalized to leading entry 1.
inline InoueData parameters_from_matrix(const QMatrix& a) {
    SpectrumClassification cls = classify_spectrum(a);
    if (!cls.admissible) throw NotAdmissibleError(cls.reason);

    InoueData data;
    data.a = a;
    data.m = cls.m;
    data.n = cls.n;
    data.alpha = cls.alpha;
    data.beta = cls.beta;
    data.t0 = std::log(cls.alpha);
    data.p = std::arg(cls.beta) / data.t0;  // principal branch, arg in (0, pi)

    DMatrix ad = to_double_matrix(a);
    // left eigenvectors of A are kernel vectors of (A^T - lambda I)
    auto transpose_minus = [&](std::complex<double> lambda) {
        std::array<std::array<std::complex<double>, 3>, 3> rows{};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) rows[i][j] = ad(static_cast<std::size_t>(j),
                                                        static_cast<std::size_t>(i));
            rows[i][i] -= lambda;
        }
        return rows;
    };
    auto normalize_leading = [](std::array<std::complex<double>, 3> v) {
        double scale = detail::cnorm(v);
        int lead = 0;
        while (lead < 3 && std::abs(v[lead]) <= 1e-9 * scale) ++lead;
        if (lead == 3) throw std::domain_error("zero eigenvector");
        std::complex<double> inv = 1.0 / v[lead];
        for (auto& x : v) x *= inv;
        return v;
    };

    auto u = normalize_leading(detail::kernel_direction(transpose_minus(cls.alpha)));
    auto z = normalize_leading(detail::kernel_direction(transpose_minus(std::conj(cls.beta))));

    for (int j = 0; j < 3; ++j) {
        data.conjugator(0, static_cast<std::size_t>(j)) = u[j].real();
        data.conjugator(1, static_cast<std::size_t>(j)) = z[j].real();
        data.conjugator(2, static_cast<std::size_t>(j)) = z[j].imag();
    }

    DMatrix lhs = data.conjugator * ad;
    DMatrix rhs = rho_at(data.p, data.t0) * data.conjugator;
    data.residual = max_abs(lhs - rhs);
    DMatrix inv = detail::dmat3_inverse(data.conjugator);
    data.condition = max_abs(data.conjugator) * max_abs(inv);
    return data;
}

/// Companion matrix of x^3 - m x^2 + n x - 1.
inline QMatrix companion_matrix(std::int64_t m, std::int64_t n) {
    return QMatrix::from_rows({{rat(0), rat(0), rat(1)},
                               {rat(1), rat(0), rat(-n)},
                               {rat(0), rat(1), rat(m)}});
}

struct AdmissiblePair {
    std::int64_t m = 0;
    std::int64_t n = 0;
    QMatrix companion = QMatrix::identity(3);
};

/// All admissible companion matrices with m in [m_lo, m_hi], n in [n_lo, n_hi],
/// ordered by (m, n).
inline std::vector<AdmissiblePair> enumerate_admissible(std::int64_t m_lo, std::int64_t m_hi,
                                                        std::int64_t n_lo, std::int64_t n_hi) {
    std::vector<AdmissiblePair> out;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        for (std::int64_t n = n_lo; n <= n_hi; ++n) {
            QMatrix c = companion_matrix(m, n);
            if (classify_spectrum(c).admissible) {
                out.push_back({m, n, std::move(c)});
            }
        }
    }
    return out;
}

/// Max rounding residual of P^{-1} rho(t0) P z over random integer vectors z;
/// small values certify that rho(t0) preserves the lattice P Z^3.
inline double lattice_residual(const InoueData& data, int samples = 100,
                               unsigned int seed = 12345) {
    DMatrix inv = detail::dmat3_inverse(data.conjugator);
    DMatrix action = inv * rho_at(data.p, data.t0) * data.conjugator;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> entry(-9, 9);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        double z[3] = {static_cast<double>(entry(rng)), static_cast<double>(entry(rng)),
                       static_cast<double>(entry(rng))};
        for (int i = 0; i < 3; ++i) {
            double w = 0.0;
            for (int j = 0; j < 3; ++j) {
                w += action(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * z[j];
            }
            worst = std::max(worst, std::fabs(w - std::round(w)));
        }
    }
    return worst;
}

}  // namespace gktorus
