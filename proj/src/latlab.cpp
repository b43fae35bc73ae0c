#include "binform/latlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>

#include "binform/parallel.hpp"

namespace binform {

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
    // b > 0
    Integer q = a / b;
    if (a < 0 && q * b != a) q -= 1;
    return q;
}

Integer floor_of(const Rational& q) { return floor_div(numerator(q), denominator(q)); }

Integer round_of(const Rational& q) { return floor_of(q + Rational(1, 2)); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

// Gram-Schmidt data of the rows of b: mu(i, j) for j < i and |b*_i|^2.
struct Gso {
    RatMatrix mu;
    std::vector<Rational> norms;
};

Gso gso_of_gram(const IntMatrix& gram) {
    const int r = static_cast<int>(gram.rows());
    Gso g;
    g.mu = RatMatrix::Zero(r, r);
    g.norms.assign(r, Rational(0));
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < i; ++j) {
            Rational s = Rational(gram(i, j));
            for (int k = 0; k < j; ++k) s -= g.mu(j, k) * g.mu(i, k) * g.norms[k];
            g.mu(i, j) = s / g.norms[j];
        }
        Rational s = Rational(gram(i, i));
        for (int k = 0; k < i; ++k) s -= g.mu(i, k) * g.mu(i, k) * g.norms[k];
        if (s <= 0) throw Error(ErrorKind::ContractViolation, "rows are linearly dependent");
        g.norms[i] = s;
    }
    return g;
}

IntMatrix upper_coordinates(const IntMatrix& m) {
    const int n = static_cast<int>(m.rows());
    IntMatrix out(1, n * (n + 1) / 2);
    for (int i = 0, k = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out(0, k++) = m(i, j);
    return out;
}

bool positive_first(const IntVector& v) {
    for (const auto& x : v)
        if (x != 0) return x > 0;
    return false;
}

bool lex_less(const IntVector& a, const IntVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return a(i) < b(i);
    return false;
}

} // namespace

LatticeBasis::LatticeBasis(IntMatrix r) : rows(std::move(r)) {
    if (rows.rows() == 0) throw Error(ErrorKind::ContractViolation, "lattice needs rank at least 1");
    if (exact_rank(rows) != rows.rows()) throw Error(ErrorKind::ContractViolation, "lattice rows are dependent");
}

IntMatrix star(const IntVector& v, const IntVector& w) {
    if (v.size() != w.size()) throw Error(ErrorKind::ContractViolation, "star needs vectors of equal dimension");
    IntMatrix vw = v * w.transpose();
    IntMatrix pair(2, v.size());
    pair.row(0) = v.transpose();
    pair.row(1) = w.transpose();
    if (exact_rank(pair) < 2) return vw;
    return vw + IntMatrix(vw.transpose());
}

Integer frobenius(const IntMatrix& x, const IntMatrix& y) {
    Integer s = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) s += x(i, j) * y(i, j);
    return s;
}

namespace {

std::vector<IntMatrix> star_family(const LatticeBasis& lattice) {
    std::vector<IntMatrix> out;
    const int r = lattice.rank();
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j)
            out.push_back(star(lattice.rows.row(i).transpose(), lattice.rows.row(j).transpose()));
    return out;
}

} // namespace

std::vector<IntMatrix> s_lambda_basis(const LatticeBasis& lattice) {
    auto family = star_family(lattice);
    const int n = lattice.ambient();
    IntMatrix coords(static_cast<Eigen::Index>(family.size()), n * (n + 1) / 2);
    for (std::size_t k = 0; k < family.size(); ++k) coords.row(static_cast<Eigen::Index>(k)) = upper_coordinates(family[k]);
    // Integral symmetric matrices are integral upper coordinates, so the span
    // is all of S(Lambda) exactly when these rows are saturated.
    if (!is_primitive(coords)) throw Error(ErrorKind::NotPrimitive, "star products do not span S(Lambda)");
    return family;
}

Covolume covolume(const LatticeBasis& lattice) {
    Covolume c;
    c.squared = bareiss_determinant(lattice.gram());
    c.value = std::sqrt(c.squared.convert_to<double>());
    return c;
}

Integer symmetric_covolume_squared(const std::vector<IntMatrix>& basis) {
    const auto k = static_cast<Eigen::Index>(basis.size());
    IntMatrix g(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j) g(i, j) = g(j, i) = frobenius(basis[i], basis[j]);
    return bareiss_determinant(g);
}

CovolumeIdentity covolume_identity_check(const LatticeBasis& lattice) {
    const int r = lattice.rank();
    CovolumeIdentity out;
    out.lhs = symmetric_covolume_squared(star_family(lattice));
    Integer d2 = covolume(lattice).squared;
    out.rhs = Integer(1) << (r * (r - 1) / 2);
    for (int i = 0; i <= r; ++i) out.rhs *= d2;
    out.holds = out.lhs == out.rhs;
    return out;
}

IntMatrix lll_reduce(const IntMatrix& input) {
    IntMatrix b = input;
    const int r = static_cast<int>(b.rows());
    if (r <= 1) return b;
    const Rational three_quarters(3, 4);
    Gso g = gso_of_gram(IntMatrix(b * b.transpose()));
    int k = 1;
    while (k < r) {
        for (int j = k - 1; j >= 0; --j) {
            Integer q = round_of(g.mu(k, j));
            if (q == 0) continue;
            b.row(k) -= q * b.row(j);
            // size reduction only touches row k of mu
            for (int i = 0; i < j; ++i) g.mu(k, i) -= Rational(q) * g.mu(j, i);
            g.mu(k, j) -= Rational(q);
        }
        if (g.norms[k] >= (three_quarters - g.mu(k, k - 1) * g.mu(k, k - 1)) * g.norms[k - 1]) {
            ++k;
        } else {
            b.row(k).swap(b.row(k - 1));
            g = gso_of_gram(IntMatrix(b * b.transpose()));
            k = std::max(k - 1, 1);
        }
    }
    return b;
}

std::vector<IntVector> short_vectors(const IntMatrix& gram, const Integer& bound, std::uint64_t budget,
                                     std::uint64_t* nodes) {
    const int r = static_cast<int>(gram.rows());
    Gso g = gso_of_gram(gram);
    std::vector<IntVector> out;
    IntVector x = IntVector::Zero(r);
    std::uint64_t local = 0;
    const Rational R(bound);
    // level j fixes x_j given x_{j+1..r-1}; partial is the norm used so far
    auto recurse = [&](auto&& self, int j, const Rational& partial) -> void {
        Rational center = 0;
        for (int i = j + 1; i < r; ++i) center -= Rational(x(i)) * g.mu(i, j);
        Rational rad2 = (R - partial) / g.norms[j];
        double cd = to_double(center), rd = std::sqrt(std::max(0.0, to_double(rad2)));
        Integer lo = Integer(static_cast<long long>(std::floor(cd - rd))) - 1;
        Integer hi = Integer(static_cast<long long>(std::ceil(cd + rd))) + 1;
        auto outside = [&](const Integer& v) {
            Rational d = Rational(v) - center;
            return d * d > rad2;
        };
        while (lo <= hi && outside(lo)) ++lo;
        while (hi >= lo && outside(hi)) --hi;
        for (Integer v = lo; v <= hi; ++v) {
            if (++local > budget) throw Error(ErrorKind::BudgetExceeded, "short vector enumeration over budget");
            x(j) = v;
            Rational d = Rational(v) - center;
            Rational next = partial + d * d * g.norms[j];
            if (j == 0) out.push_back(x);
            else self(self, j - 1, next);
        }
        x(j) = 0;
    };
    if (bound >= 0) recurse(recurse, r - 1, Rational(0));
    if (nodes) *nodes += local;
    return out;
}

bool ReducedBasis::almost_reduced(const Rational& c, const Integer& covolume_squared) const {
    Integer prod = 1;
    for (const auto& l : squared_lengths) prod *= l;
    return Rational(prod) <= c * c * Rational(covolume_squared);
}

ReducedBasis reduced_basis(const LatticeBasis& lattice, std::uint64_t budget) {
    const int r = lattice.rank();
    IntMatrix b = lll_reduce(lattice.rows);
    IntMatrix gram = b * b.transpose();
    Integer radius = 0;
    for (int i = 0; i < r; ++i) radius = std::max(radius, gram(i, i));
    ReducedBasis out;
    while (true) {
        auto coeffs = short_vectors(gram, radius, budget, &out.nodes);
        struct Candidate {
            Integer norm;
            IntVector vec, coeff;
        };
        std::vector<Candidate> cands;
        for (auto& x : coeffs) {
            IntVector v = (x.transpose() * b).transpose();
            if (!positive_first(v)) continue;
            Integer norm = v.squaredNorm();
            cands.push_back({norm, v, x});
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& c) {
            if (a.norm != c.norm) return a.norm < c.norm;
            return lex_less(a.vec, c.vec);
        });
        // Successive minima: greedy independent vectors.
        std::vector<Integer> minima;
        {
            IntMatrix chosen(0, r);
            for (const auto& c : cands) {
                IntMatrix trial(chosen.rows() + 1, r);
                trial.topRows(chosen.rows()) = chosen;
                trial.row(chosen.rows()) = c.coeff.transpose();
                if (exact_rank(trial) == trial.rows()) {
                    chosen = trial;
                    minima.push_back(c.norm);
                    if (chosen.rows() == r) break;
                }
            }
        }
        // Minkowski: greedy extension to a basis.
        IntMatrix chosen(0, r), rows(0, lattice.ambient());
        std::vector<Integer> lengths;
        for (int k = 0; k < r; ++k) {
            bool found = false;
            for (const auto& c : cands) {
                IntMatrix trial(chosen.rows() + 1, r);
                trial.topRows(chosen.rows()) = chosen;
                trial.row(chosen.rows()) = c.coeff.transpose();
                if (exact_rank(trial) != trial.rows() || !is_primitive(trial)) continue;
                chosen = trial;
                IntMatrix next(rows.rows() + 1, rows.cols());
                next.topRows(rows.rows()) = rows;
                next.row(rows.rows()) = c.vec.transpose();
                rows = next;
                lengths.push_back(c.norm);
                found = true;
                break;
            }
            if (!found) break;
        }
        if (static_cast<int>(lengths.size()) == r && static_cast<int>(minima.size()) == r) {
            out.basis = rows;
            out.squared_lengths = lengths;
            out.minima_squared = minima;
            return out;
        }
        radius *= 2;
    }
}

std::uint64_t count_points_in_box(const LatticeBasis& lattice, const Integer& y, std::uint64_t budget) {
    if (y < 0) return 0;
    IntMatrix b = lll_reduce(lattice.rows);
    IntMatrix gram = b * b.transpose();
    Integer bound = y * y * lattice.ambient();
    std::uint64_t count = 0;
    for (const auto& x : short_vectors(gram, bound, budget)) {
        IntVector v = (x.transpose() * b).transpose();
        bool inside = true;
        for (const auto& e : v) inside = inside && abs(e) <= y;
        if (inside) ++count;
    }
    return count;
}

TorusScaling::TorusScaling(std::vector<Rational> values) : t(std::move(values)) {
    if (t.empty()) throw Error(ErrorKind::ContractViolation, "torus scaling needs at least one entry");
    for (const auto& x : t)
        if (x <= 0) throw Error(ErrorKind::ContractViolation, "torus scaling entries must be positive");
}

TorusScaling TorusScaling::identity(int n) { return TorusScaling(std::vector<Rational>(n, Rational(1))); }

TorusScaling TorusScaling::parse(const std::string& text, int n) {
    std::vector<Rational> t;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto slash = item.find('/');
        try {
            if (slash == std::string::npos) {
                t.emplace_back(Integer(item));
            } else {
                Integer den(item.substr(slash + 1));
                if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in scaling");
                t.emplace_back(Integer(item.substr(0, slash)), den);
            }
        } catch (const std::runtime_error& e) {
            if (dynamic_cast<const Error*>(&e)) throw;
            throw Error(ErrorKind::ParseError, "bad scaling entry: " + item);
        }
    }
    if (static_cast<int>(t.size()) != n)
        throw Error(ErrorKind::ParseError, "scaling needs " + std::to_string(n) + " entries");
    return TorusScaling(std::move(t));
}

bool TorusScaling::determinant_one() const {
    Rational p = 1;
    for (const auto& x : t) p *= x;
    return p == 1;
}

bool TorusScaling::sorted() const { return std::is_sorted(t.rbegin(), t.rend()); }

std::string TorusScaling::str() const {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += to_string(t[i]);
    }
    return out;
}

Rational C_constant(int r, const TorusScaling& s) {
    const int n = s.size();
    if (r < 1 || r >= n) throw Error(ErrorKind::ContractViolation, "C(r, s) needs 1 <= r < n");
    Rational c = 1;
    for (int i = 1; i <= r; ++i)
        for (int j = 1; j <= n - i; ++j) c *= s.t[j - 1] / s.t[n - i];
    return c;
}

Rational delta(const TorusScaling& s) {
    Rational d = 1;
    for (int i = 0; i < s.size(); ++i)
        for (int j = i + 1; j < s.size(); ++j) d *= s.t[j] / s.t[i];
    return d;
}

namespace {

using i128 = __int128;

// Rank of a symmetric n x n matrix (n <= 4) with small entries.
int small_rank(const std::int64_t* entries, int n) {
    i128 m[4][4];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = entries[i * n + j];
    int rank = 0;
    i128 prev = 1;
    for (int c = 0; c < n && rank < n; ++c) {
        int pivot = rank;
        while (pivot < n && m[pivot][c] == 0) ++pivot;
        if (pivot == n) continue;
        for (int j = 0; j < n; ++j) std::swap(m[rank][j], m[pivot][j]);
        for (int i = rank + 1; i < n; ++i) {
            for (int j = c + 1; j < n; ++j) m[i][j] = (m[i][j] * m[rank][c] - m[i][c] * m[rank][j]) / prev;
            m[i][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

struct Box {
    int n = 0;
    std::vector<std::vector<std::int64_t>> b;  // b[i][j] = floor(Y / (t_i t_j))

    double volume() const {
        double v = 1;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) v *= 2.0 * static_cast<double>(b[i][j]) + 1;
        return v;
    }
};

std::int64_t isqrt(std::int64_t v) {
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
}

// Rank one: c v v^t with v primitive, first nonzero entry positive, c != 0.
std::uint64_t count_rank_one(const Box& box, std::uint64_t budget) {
    const int n = box.n;
    std::vector<std::int64_t> lim(n), v(n);
    double work = 1;
    for (int i = 0; i < n; ++i) {
        lim[i] = isqrt(box.b[i][i]);
        work *= 2.0 * static_cast<double>(lim[i]) + 1;
    }
    if (work > static_cast<double>(budget)) throw Error(ErrorKind::BudgetExceeded, "rank-one count over budget");
    std::uint64_t count = 0;
    auto recurse = [&](auto&& self, int i) -> void {
        if (i == n) {
            std::int64_t g = 0;
            for (auto x : v) g = std::gcd(g, x);
            if (g != 1 || !std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; })) return;
            for (auto x : v) {
                if (x == 0) continue;
                if (x < 0) return;
                break;
            }
            std::int64_t cmax = INT64_MAX;
            for (int a = 0; a < n; ++a)
                for (int c = a; c < n; ++c) {
                    std::int64_t prod = std::abs(v[a] * v[c]);
                    if (prod) cmax = std::min(cmax, box.b[a][c] / prod);
                }
            count += 2 * static_cast<std::uint64_t>(cmax);
            return;
        }
        for (std::int64_t x = -lim[i]; x <= lim[i]; ++x) {
            v[i] = x;
            self(self, i + 1);
        }
    };
    recurse(recurse, 0);
    return count;
}

// n = 3: det = b33 (b11 b22 - b12^2) + k(b11, b12, b22, b13, b23), solved for b33.
std::uint64_t count_singular_3(const Box& box, std::uint64_t budget, int threads) {
    const auto& b = box.b;
    double work = box.volume() / (2.0 * static_cast<double>(b[2][2]) + 1);
    if (work > static_cast<double>(budget)) throw Error(ErrorKind::BudgetExceeded, "singular count over budget");
    const std::int64_t shards = 2 * b[0][0] + 1;
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(shards), 0);
    run_shards(shards, threads, [&](std::int64_t shard) {
        const i128 b11 = shard - b[0][0];
        std::uint64_t local = 0;
        for (std::int64_t x12 = -b[0][1]; x12 <= b[0][1]; ++x12)
            for (std::int64_t x22 = -b[1][1]; x22 <= b[1][1]; ++x22) {
                const i128 b12 = x12, b22 = x22;
                const i128 m = b11 * b22 - b12 * b12;
                for (std::int64_t x13 = -b[0][2]; x13 <= b[0][2]; ++x13)
                    for (std::int64_t x23 = -b[1][2]; x23 <= b[1][2]; ++x23) {
                        const i128 b13 = x13, b23 = x23;
                        const i128 k = -b11 * b23 * b23 + 2 * b12 * b13 * b23 - b22 * b13 * b13;
                        if (m == 0) {
                            if (k == 0) local += static_cast<std::uint64_t>(2 * b[2][2] + 1);
                        } else if (k % m == 0) {
                            i128 b33 = -k / m;
                            if (b33 >= -b[2][2] && b33 <= b[2][2]) ++local;
                        }
                    }
            }
        partial[static_cast<std::size_t>(shard)] = local;
    });
    return std::accumulate(partial.begin(), partial.end(), std::uint64_t(0));
}

std::uint64_t count_by_enumeration(const Box& box, int r, std::uint64_t budget, int threads) {
    const int n = box.n;
    if (box.volume() > static_cast<double>(budget)) throw Error(ErrorKind::BudgetExceeded, "enumeration over budget");
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) slots.emplace_back(i, j);
    for (auto [i, j] : slots)
        if (box.b[i][j] > 4096) throw Error(ErrorKind::BudgetExceeded, "entries too large for enumeration");
    const std::int64_t shards = 2 * box.b[0][0] + 1;
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(shards), 0);
    run_shards(shards, threads, [&](std::int64_t shard) {
        std::int64_t m[16] = {};
        m[0] = shard - box.b[0][0];
        std::uint64_t local = 0;
        auto recurse = [&](auto&& self, std::size_t s) -> void {
            if (s == slots.size()) {
                if (small_rank(m, n) == r) ++local;
                return;
            }
            auto [i, j] = slots[s];
            for (std::int64_t x = -box.b[i][j]; x <= box.b[i][j]; ++x) {
                m[i * n + j] = m[j * n + i] = x;
                self(self, s + 1);
            }
        };
        recurse(recurse, 1);
        partial[static_cast<std::size_t>(shard)] = local;
    });
    return std::accumulate(partial.begin(), partial.end(), std::uint64_t(0));
}

} // namespace

CountReport count_rank_r_symmetric(int n, int r, const Rational& Y, const TorusScaling& s,
                                   const CountOptions& options) {
    if (n < 2 || n > 4) throw Error(ErrorKind::ContractViolation, "counting supports 2 <= n <= 4");
    if (r < 1 || r >= n) throw Error(ErrorKind::ContractViolation, "counting supports 1 <= r < n");
    if (s.size() != n) throw Error(ErrorKind::ContractViolation, "scaling has the wrong length");
    if (Y < 0) throw Error(ErrorKind::ContractViolation, "Y must be nonnegative");
    CountReport rep;
    rep.n = n;
    rep.r = r;
    rep.Y = Y;
    rep.s = s;
    Box box;
    box.n = n;
    box.b.assign(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) box.b[i][j] = checked_i64(floor_of(Y / (s.t[i] * s.t[j])));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (box.b[i][j] > (std::int64_t(1) << 20)) throw Error(ErrorKind::BudgetExceeded, "box entries too large");
    if (options.brute_force) {
        rep.method = "enumeration";
        rep.count = count_by_enumeration(box, r, options.budget, options.threads);
    } else if (r == 1) {
        rep.method = "rank-one";
        rep.count = count_rank_one(box, options.budget);
    } else if (n == 3 && r == 2) {
        rep.method = "det-solve";
        std::uint64_t singular = count_singular_3(box, options.budget, options.threads);
        rep.count = singular - 1 - count_rank_one(box, options.budget);
    } else {
        rep.method = "enumeration";
        rep.count = count_by_enumeration(box, r, options.budget, options.threads);
    }
    double y = to_double(Y);
    double log_factor = 1.0 + std::log(std::max(y, 1.0));
    rep.bound = to_double(C_constant(r, s)) * std::pow(y, n * r / 2.0) * std::pow(log_factor, r);
    rep.ratio = rep.bound > 0 ? static_cast<double>(rep.count) / rep.bound : 0.0;
    return rep;
}

} // namespace binform
