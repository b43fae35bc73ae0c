// Strong Minkowski reduction of the basis {1, zeta_1, ..., zeta_{n-1}} of R_f
// in the Minkowski embedding, with certified root enclosures.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "binform/forms.hpp"
#include "binform/linalg.hpp"

namespace binform {

const char* to_string(Reduction r) {
    switch (r) {
    case Reduction::yes: return "yes";
    case Reduction::no: return "no";
    case Reduction::uncertain: return "uncertain";
    }
    return "uncertain";
}

namespace {

template <unsigned Digits>
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>,
                                           boost::multiprecision::et_off>;

template <typename R>
struct Complex {
    R re = 0, im = 0;
    Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
    Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
    Complex operator*(const Complex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Complex operator/(const Complex& o) const {
        R d = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
    R norm() const { return sqrt(re * re + im * im); }
    Complex conj() const { return {re, -im}; }
};

// Real interval as midpoint and radius.
template <typename R>
struct Ball {
    R mid = 0, rad = 0;
};

// Complex disk as center and radius.
template <typename R>
struct Disk {
    Complex<R> mid;
    R rad = 0;
};

template <typename R>
R unit_roundoff(unsigned digits) {
    return pow(R(10), -static_cast<int>(digits) + 3);
}

template <typename R>
Disk<R> disk_add(const Disk<R>& a, const Disk<R>& b, const R& u) {
    Disk<R> out{a.mid + b.mid, a.rad + b.rad};
    out.rad += u * out.mid.norm();
    return out;
}

template <typename R>
Disk<R> disk_mul(const Disk<R>& a, const Disk<R>& b, const R& u) {
    Disk<R> out;
    out.mid = a.mid * b.mid;
    out.rad = a.mid.norm() * b.rad + b.mid.norm() * a.rad + a.rad * b.rad + u * out.mid.norm();
    return out;
}

template <typename R>
Ball<R> ball_add(const Ball<R>& a, const Ball<R>& b, const R& u) {
    Ball<R> out{a.mid + b.mid, a.rad + b.rad};
    out.rad += u * abs(out.mid);
    return out;
}

template <typename R>
Ball<R> ball_mul(const Ball<R>& a, const Ball<R>& b, const R& u) {
    Ball<R> out;
    out.mid = a.mid * b.mid;
    out.rad = abs(a.mid) * b.rad + abs(b.mid) * a.rad + a.rad * b.rad + u * abs(out.mid);
    return out;
}

// Certified enclosures of the roots of sum a_i x^{n-i}, or nullopt when the
// iteration does not separate them at this precision.
template <typename R>
std::optional<std::vector<Disk<R>>> root_disks(const std::vector<Integer>& a, unsigned digits) {
    const int n = static_cast<int>(a.size()) - 1;
    using C = Complex<R>;
    std::vector<R> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = R(a[i]) / R(a[0]);  // monic, c[0] = 1
    auto eval = [&](const C& z) {
        C acc{R(1), R(0)};
        for (int i = 1; i <= n; ++i) acc = acc * z + C{c[i], R(0)};
        return acc;
    };
    R bound = 1;
    for (int i = 1; i <= n; ++i) bound = std::max(bound, R(1) + abs(c[i]));
    std::vector<C> z(n);
    C seed{R("0.4"), R("0.9")}, w{R(1), R(0)};
    for (int i = 0; i < n; ++i) {
        z[i] = w * C{bound, R(0)};
        w = w * seed;
    }
    const R tol = pow(R(10), -static_cast<int>(digits) + 8);
    bool converged = false;
    for (int iter = 0; iter < 4000 && !converged; ++iter) {
        R worst = 0;
        for (int i = 0; i < n; ++i) {
            C denom{R(1), R(0)};
            for (int j = 0; j < n; ++j)
                if (j != i) denom = denom * (z[i] - z[j]);
            C step = eval(z[i]) / denom;
            z[i] = z[i] - step;
            worst = std::max(worst, step.norm() / std::max(R(1), z[i].norm()));
        }
        converged = worst < tol;
    }
    if (!converged) return std::nullopt;
    // Disks of radius n |W_i| around the approximations contain all roots;
    // when pairwise disjoint each holds exactly one.
    const R u = unit_roundoff<R>(digits);
    std::vector<Disk<R>> out(n);
    for (int i = 0; i < n; ++i) {
        C denom{R(1), R(0)};
        for (int j = 0; j < n; ++j)
            if (j != i) denom = denom * (z[i] - z[j]);
        R weierstrass = (eval(z[i]) / denom).norm();
        out[i].mid = z[i];
        out[i].rad = R(n) * weierstrass + u * (R(1) + z[i].norm()) * R(n + 1);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((out[i].mid - out[j].mid).norm() <= out[i].rad + out[j].rad) return std::nullopt;
    return out;
}

template <typename R>
struct EmbeddedGram {
    std::vector<std::vector<Ball<R>>> gram;
    int complex_places = 0;
};

// Gram matrix of the basis in the Minkowski embedding, as balls.
template <typename R>
std::optional<EmbeddedGram<R>> minkowski_gram(const BinaryForm& f, unsigned digits) {
    const int n = f.degree();
    auto disks = root_disks<R>(f.coeffs(), digits);
    if (!disks) return std::nullopt;
    const R u = unit_roundoff<R>(digits);
    std::vector<Disk<R>> places;
    std::vector<bool> is_real;
    for (int i = 0; i < n; ++i) {
        const auto& d = (*disks)[i];
        bool touches_axis = abs(d.mid.im) <= d.rad;
        if (touches_axis) {
            // Real iff the conjugate disk meets no other disk.
            for (int j = 0; j < n; ++j)
                if (j != i && (d.mid.conj() - (*disks)[j].mid).norm() <= d.rad + (*disks)[j].rad) return std::nullopt;
            places.push_back({{d.mid.re, R(0)}, d.rad});
            is_real.push_back(true);
        } else if (d.mid.im > 0) {
            places.push_back(d);
            is_real.push_back(false);
        }
    }
    int r1 = static_cast<int>(std::count(is_real.begin(), is_real.end(), true));
    int r2 = static_cast<int>(places.size()) - r1;
    if (r1 + 2 * r2 != n) return std::nullopt;
    // Coordinates of zeta_k at each place.
    std::vector<std::vector<Ball<R>>> coords(n);
    for (std::size_t pl = 0; pl < places.size(); ++pl) {
        const auto& root = places[pl];
        // zeta_k(r) = a_0 r^k + ... + a_{k-1} r computed as r * (a_0 r^{k-1} + ... + a_{k-1}).
        Disk<R> horner{{R(0), R(0)}, R(0)};
        for (int k = 0; k < n; ++k) {
            Disk<R> value;
            if (k == 0) {
                value = {{R(1), R(0)}, R(0)};
            } else {
                horner = disk_add(disk_mul(horner, root, u), Disk<R>{{R(f[k - 1]), R(0)}, R(0)}, u);
                value = disk_mul(horner, root, u);
            }
            if (is_real[pl]) {
                coords[k].push_back({value.mid.re, value.rad});
            } else {
                coords[k].push_back({value.mid.re, value.rad});
                coords[k].push_back({value.mid.im, value.rad});
            }
        }
    }
    std::vector<std::vector<Ball<R>>> gram(n, std::vector<Ball<R>>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Ball<R> acc;
            for (std::size_t c = 0; c < coords[i].size(); ++c) acc = ball_add(acc, ball_mul(coords[i][c], coords[j][c], u), u);
            gram[i][j] = acc;
        }
    return EmbeddedGram<R>{gram, r2};
}

// All nonzero integer vectors x (up to sign) with x^T G x <= bound.
std::vector<std::vector<long long>> short_vectors(const Eigen::MatrixXd& g, double bound, std::size_t cap, bool& overflow) {
    const int n = static_cast<int>(g.rows());
    std::vector<std::vector<long long>> out;
    overflow = false;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
        overflow = true;
        return out;
    }
    Eigen::MatrixXd l = llt.matrixU();  // g = U^T U
    // q(x) = sum_i (u_ii x_i + sum_{j>i} u_ij x_j)^2, enumerate from the last coordinate.
    std::vector<long long> x(n, 0);
    std::function<void(int, double)> rec = [&](int i, double remaining) {
        if (overflow) return;
        double center = 0;
        for (int j = i + 1; j < n; ++j) center += l(i, j) * static_cast<double>(x[j]);
        center /= l(i, i);
        double span = std::sqrt(std::max(0.0, remaining)) / l(i, i);
        long long lo = static_cast<long long>(std::ceil(-center - span - 1e-9));
        long long hi = static_cast<long long>(std::floor(-center + span + 1e-9));
        for (long long v = lo; v <= hi; ++v) {
            x[i] = v;
            double t = l(i, i) * (static_cast<double>(v) + center);
            double rest = remaining - t * t;
            if (rest < -1e-9 * (1 + bound)) continue;
            if (i == 0) {
                bool zero = std::all_of(x.begin(), x.end(), [](long long c) { return c == 0; });
                if (zero) continue;
                // keep one of each +-pair: first nonzero coordinate positive
                auto it = std::find_if(x.begin(), x.end(), [](long long c) { return c != 0; });
                if (*it < 0) continue;
                out.push_back(x);
                if (out.size() > cap) {
                    overflow = true;
                    return;
                }
            } else {
                rec(i - 1, rest);
            }
        }
        x[i] = 0;
    };
    rec(n - 1, bound);
    return out;
}

bool admissible(const std::vector<long long>& x, int k) {
    // x can replace the k-th basis vector iff gcd(x_k, ..., x_{n-1}) = 1.
    long long g = 0;
    for (std::size_t i = static_cast<std::size_t>(k); i < x.size(); ++i) g = std::gcd(g, std::llabs(x[i]));
    if (g != 1) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != (static_cast<int>(i) == k ? 1 : 0)) return true;
    return false;  // x = e_k itself
}

// Decision on an exact integer Gram matrix.
Reduction decide_exact(const IntMatrix& gram) {
    const int n = static_cast<int>(gram.rows());
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = static_cast<double>(gram(i, j));
    for (int k = 0; k < n; ++k) {
        bool overflow = false;
        double bound = g(k, k) * (1 + 1e-9) + 1e-6;
        auto vecs = short_vectors(g, bound, 2000000, overflow);
        if (overflow) return Reduction::uncertain;
        for (const auto& x : vecs) {
            if (!admissible(x, k)) continue;
            Integer q = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) q += gram(i, j) * x[i] * x[j];
            if (q <= gram(k, k)) return Reduction::no;
        }
    }
    return Reduction::yes;
}

template <typename R>
Reduction decide_balls(const std::vector<std::vector<Ball<R>>>& gram, unsigned digits) {
    const int n = static_cast<int>(gram.size());
    const R u = unit_roundoff<R>(digits);
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = static_cast<double>(gram[i][j].mid);
    bool unsure = false;
    for (int k = 0; k < n; ++k) {
        bool overflow = false;
        double bound = static_cast<double>(gram[k][k].mid + gram[k][k].rad) * (1 + 1e-6) + 1e-6;
        auto vecs = short_vectors(g, bound, 2000000, overflow);
        if (overflow) return Reduction::uncertain;
        for (const auto& x : vecs) {
            if (!admissible(x, k)) continue;
            Ball<R> q;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (x[i] == 0 || x[j] == 0) continue;
                    Ball<R> coef{R(x[i] * x[j]), R(0)};
                    q = ball_add(q, ball_mul(coef, gram[i][j], u), u);
                }
            R diff = q.mid - gram[k][k].mid;
            R rad = q.rad + gram[k][k].rad;
            if (diff + rad < 0) return Reduction::no;
            if (diff - rad <= 0) unsure = true;
        }
    }
    return unsure ? Reduction::uncertain : Reduction::yes;
}

template <unsigned Digits>
std::optional<Reduction> attempt(const BinaryForm& f) {
    auto embedded = minkowski_gram<Real<Digits>>(f, Digits);
    if (!embedded) return std::nullopt;
    if (embedded->complex_places == 0) {
        // The Minkowski Gram of a totally real ring is its integral trace form.
        Reduction r = decide_exact(ring_of(f).trace_gram());
        if (r == Reduction::uncertain) return std::nullopt;
        return r;
    }
    Reduction r = decide_balls(embedded->gram, Digits);
    if (r == Reduction::uncertain) return std::nullopt;
    return r;
}

// Double-precision Gram for the cheap prefilter.
Eigen::MatrixXd approximate_gram(const BinaryForm& f) {
    const int n = f.degree();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    double a0 = static_cast<double>(f[0]);
    for (int i = 0; i < n; ++i) companion(0, i) = -static_cast<double>(f[i + 1]) / a0;
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    auto roots = es.eigenvalues();
    std::vector<std::vector<double>> coords(n);
    for (int r = 0; r < n; ++r) {
        std::complex<double> z = roots(r);
        bool real = std::abs(z.imag()) < 1e-7 * (1 + std::abs(z));
        if (!real && z.imag() < 0) continue;
        std::complex<double> horner = 0;
        for (int k = 0; k < n; ++k) {
            std::complex<double> value = 1;
            if (k > 0) {
                horner = horner * z + static_cast<double>(f[k - 1]);
                value = horner * z;
            }
            coords[k].push_back(value.real());
            if (!real) coords[k].push_back(value.imag());
        }
    }
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t c = 0; c < coords[i].size(); ++c) s += coords[i][c] * coords[j][c];
            gram(i, j) = s;
        }
    return gram;
}

} // namespace

ReductionReport is_strongly_minkowski_reduced(const BinaryForm& f, int digits, int max_digits) {
    if (f[0] == 0) throw Error(ErrorKind::ContractViolation, "leading coefficient vanishes");
    if (discriminant(f) == 0) throw Error(ErrorKind::DegenerateForm, "discriminant vanishes");
    const int n = f.degree();
    ReductionReport report;
    if (n == 1) {
        report.verdict = Reduction::yes;
        return report;
    }
    Eigen::MatrixXd approx = approximate_gram(f);
    // Prefilter: a clearly shorter admissible vector settles "no". The margin
    // is far above double rounding for the coefficient sizes used here.
    {
        bool overflow = false;
        for (int k = 0; k < n && !overflow; ++k) {
            auto vecs = short_vectors(approx, approx(k, k) * (1 - 1e-6), 2000000, overflow);
            for (const auto& x : vecs) {
                if (!admissible(x, k)) continue;
                Eigen::VectorXd xv(n);
                for (int i = 0; i < n; ++i) xv(i) = static_cast<double>(x[i]);
                if (xv.dot(approx * xv) < approx(k, k) * (1 - 1e-6)) {
                    report.verdict = Reduction::no;
                    return report;
                }
            }
        }
    }
    for (int d = digits; d <= max_digits; d *= 2) {
        std::optional<Reduction> r;
        if (d <= 50) r = attempt<50>(f);
        else if (d <= 100) r = attempt<100>(f);
        else r = attempt<200>(f);
        report.digits_used = d <= 50 ? 50 : d <= 100 ? 100 : 200;
        if (r) {
            report.verdict = *r;
            return report;
        }
        if (d >= 200) break;
    }
    report.verdict = Reduction::uncertain;
    return report;
}

} // namespace binform
