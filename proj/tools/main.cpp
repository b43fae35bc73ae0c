// binform command-line front end. Records are JSON lines unless the
// command emits a flat table (count), which defaults to CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "binform/forms.hpp"
#include "binform/latlab.hpp"
#include "binform/localdens.hpp"
#include "binform/parallel.hpp"
#include "binform/pencils.hpp"
#include "binform/rng.hpp"
#include "binform/sieve.hpp"

using namespace binform;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int threads = 0;
    std::optional<std::uint64_t> budget;
    std::string out;
    std::string format = "auto";
};

class Output {
public:
    Output(const Globals& g, const char* natural) : format_(g.format == "auto" ? natural : g.format) {
        if (format_ != "json" && format_ != "csv") throw Error(ErrorKind::ContractViolation, "format must be json or csv");
        if (!g.out.empty()) {
            file_ = std::make_unique<std::ofstream>(g.out);
            if (!*file_) throw Error(ErrorKind::ContractViolation, "cannot open " + g.out);
        }
    }
    bool csv() const { return format_ == "csv"; }
    void json_only() const {
        if (csv()) throw Error(ErrorKind::ContractViolation, "csv is only available for count tables");
    }
    void record(const json& j) { stream() << j.dump() << '\n'; }
    void line(const std::string& s) { stream() << s << '\n'; }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::string format_;
    std::unique_ptr<std::ofstream> file_;
};

std::string str(const Integer& a) { return to_string(a); }
std::string str(const Rational& q) { return to_string(q); }

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "not a rational: " + text);
    }
}

json matrix_json(const IntMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(str(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Integer integer_of(const json& v) {
    if (v.is_number_integer()) return Integer(v.get<long long>());
    if (v.is_string()) {
        try {
            return Integer(v.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::ParseError, "matrix entry is not an integer");
}

// Row-major lower triangle, or the full matrix as nested rows.
IntMatrix from_lower_triangle(const json& entries, int n) {
    if (entries.is_array() && !entries.empty() && entries[0].is_array()) {
        if (entries.size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::ParseError, "matrix has the wrong size");
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) {
            if (!entries[i].is_array() || entries[i].size() != static_cast<std::size_t>(n))
                throw Error(ErrorKind::ParseError, "matrix row has the wrong length");
            for (int j = 0; j < n; ++j) m(i, j) = integer_of(entries[i][j]);
        }
        return m;
    }
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n * (n + 1) / 2))
        throw Error(ErrorKind::ParseError, "lower triangle has the wrong length");
    IntMatrix m(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = integer_of(entries[k++]);
    return m;
}

EnumerationOptions enumeration(const Globals& g) {
    EnumerationOptions o;
    o.threads = g.threads;
    if (g.budget) o.budget = *g.budget;
    return o;
}

// density ------------------------------------------------------------------

struct DensityArgs {
    std::string kind;
    int n = 2;
    std::int64_t p = 2;
    int j = 0;
    bool exact = false, formula = false, both = false;
    std::string variant = "stated";
    std::string constant_kind = "squarefree";
    std::uint64_t primes = 100000;
};

int run_density(const Globals& g, const DensityArgs& a) {
    Output out(g, "json");
    out.json_only();
    if (a.kind == "constant") {
        if (a.constant_kind != "squarefree" && a.constant_kind != "maximal")
            throw Error(ErrorKind::ContractViolation, "kind must be squarefree or maximal");
        auto e = euler_product_truncated(
            a.constant_kind == "squarefree" ? ConstantKind::squarefree : ConstantKind::maximal, a.n, a.primes);
        out.record({{"kind", a.constant_kind}, {"n", a.n}, {"value", e.value}, {"tail_bound", e.tail_bound},
                    {"prime_bound", e.prime_bound}, {"primes_used", e.primes_used}});
        return 0;
    }
    const ClosedForm variant = a.variant == "corrected" ? ClosedForm::corrected : ClosedForm::stated;
    if (a.variant != "stated" && a.variant != "corrected")
        throw Error(ErrorKind::ContractViolation, "variant must be stated or corrected");
    const bool want_exact = a.exact || a.both || !a.formula;
    const bool want_formula = a.formula || a.both || !a.exact;
    json rec{{"kind", a.kind == "nu" ? "nu" + std::to_string(a.j) : a.kind}, {"n", a.n}, {"p", a.p}};
    std::optional<Rational> exact, formula;
    if (want_exact) {
        auto opts = enumeration(g);
        LocalDensityReport r = a.kind == "alpha"  ? alpha_exact(a.n, a.p, opts)
                               : a.kind == "beta" ? beta_exact(a.n, a.p, opts)
                                                  : nu_exact(a.n, a.p, a.j, opts);
        exact = r.density;
        rec["exact"] = str(r.density);
        rec["sample_space"] = str(r.sample_space);
    }
    if (want_formula) {
        formula = a.kind == "alpha"  ? alpha_formula(a.n, a.p, variant)
                  : a.kind == "beta" ? beta_formula(a.n, a.p)
                                     : nu_formula(a.n, a.p, a.j, variant);
        rec["formula"] = str(*formula);
        if (a.kind != "beta") rec["variant"] = to_string(variant);
    }
    if (exact && formula) rec["match"] = *exact == *formula;
    out.record(rec);
    return 0;
}

// lift ---------------------------------------------------------------------

struct LiftArgs {
    std::string form;
    std::int64_t m = 1;
    bool even = false;
};

int run_lift(const Globals& g, const LiftArgs& a) {
    Output out(g, "json");
    out.json_only();
    BinaryForm f = BinaryForm::parse(a.form);
    json rec{{"form", f.str()}, {"m", a.m}};
    if (!a.even) {
        W0Element w = sigma_m_odd(f, a.m);
        rec["n"] = w.pencil.size();
        rec["A"] = matrix_json(w.pencil.A);
        rec["B"] = matrix_json(w.pencil.B);
        rec["Q"] = str(Q_of_W0(w));
        rec["q"] = nullptr;
        rec["roundtrip"] = invariant_form(w.pencil) == f;
    } else {
        W1Element w = sigma_m_even(f, a.m);
        FlagInvariants fl = flag_invariants(w);
        rec["n"] = w.pencil.size();
        rec["A"] = matrix_json(w.pencil.A);
        rec["B"] = matrix_json(w.pencil.B);
        rec["Q"] = str(fl.Q_standard);
        rec["q"] = str(q_of_W1(w));
        rec["Q_reflected"] = str(fl.Q_reflected);
        rec["q_reflected"] = str(fl.q_reflected);
        rec["roundtrip"] = invariant_form(w.pencil) == f.times_x();
    }
    out.record(rec);
    return 0;
}

// pencil check -------------------------------------------------------------

int run_pencil_check(const Globals& g, const std::string& path) {
    Output out(g, "json");
    out.json_only();
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ContractViolation, "cannot open " + path);
    std::string text;
    std::uint64_t line_no = 0, checked = 0, failures = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec{{"line", line_no}};
        try {
            json j = json::parse(text);
            const int n = j.at("n").get<int>();
            SymmetricPencil P(from_lower_triangle(j.at("A"), n), from_lower_triangle(j.at("B"), n));
            BinaryForm f = invariant_form(P);
            Integer d = discriminant(f);
            VanishingReport v = disc_vanishing_predicates(P);
            rec["n"] = n;
            rec["form"] = f.str();
            rec["disc"] = str(d);
            rec["vanishing"] = {{"block_zero_k", v.block_zero_k},
                                {"kernel_dim", v.kernel_dim},
                                {"kernel_isotropic", v.kernel_isotropic}};
            bool ok = !v.any() || d == 0;
            std::optional<W0Element> w;
            if (n % 2 == 1) {
                try {
                    w.emplace(P);
                } catch (const Error&) {
                }
            }
            rec["w0"] = w.has_value();
            if (w) {
                DivisibilityReport r = check_divisibility_laws(*w);
                rec["Q"] = str(r.Q);
                rec["q_squared_divides"] = r.q_squared_divides;
                rec["gram_divides"] = r.gram_divides;
                ok = ok && r.q_squared_divides;
            }
            rec["ok"] = ok;
            failures += !ok;
        } catch (const json::exception& e) {
            rec["ok"] = false;
            rec["error"] = to_string(ErrorKind::ParseError);
            rec["message"] = e.what();
            ++failures;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BudgetExceeded) throw;
            rec["ok"] = false;
            rec["error"] = to_string(e.kind());
            rec["message"] = e.what();
            ++failures;
        }
        ++checked;
        out.record(rec);
    }
    out.record({{"aggregate", true}, {"checked", checked}, {"failures", failures}});
    return 0;
}

// count --------------------------------------------------------------------

struct CountArgs {
    int n = 2, r = 1;
    std::string Y = "1";
    std::string t;
    bool brute = false;
};

int run_count(const Globals& g, const CountArgs& a) {
    Output out(g, "csv");
    TorusScaling s = a.t.empty() ? TorusScaling::identity(a.n) : TorusScaling::parse(a.t, a.n);
    CountOptions o;
    o.threads = g.threads;
    o.brute_force = a.brute;
    if (g.budget) o.budget = *g.budget;
    CountReport rep = count_rank_r_symmetric(a.n, a.r, parse_rational(a.Y), s, o);
    std::ostringstream bound, ratio;
    bound.precision(12);
    ratio.precision(12);
    bound << rep.bound;
    ratio << rep.ratio;
    if (out.csv()) {
        std::string header = "n,r,Y";
        std::string row = std::to_string(rep.n) + "," + std::to_string(rep.r) + "," + str(rep.Y);
        for (int i = 0; i < s.size(); ++i) {
            header += ",t" + std::to_string(i + 1);
            row += "," + str(s.t[static_cast<std::size_t>(i)]);
        }
        out.line(header + ",count,bound,ratio,method");
        out.line(row + "," + std::to_string(rep.count) + "," + bound.str() + "," + ratio.str() + "," + rep.method);
    } else {
        json t = json::array();
        for (const auto& x : s.t) t.push_back(str(x));
        out.record({{"n", rep.n}, {"r", rep.r}, {"Y", str(rep.Y)}, {"t", t}, {"count", rep.count},
                    {"bound", rep.bound}, {"ratio", rep.ratio}, {"method", rep.method}});
    }
    return 0;
}

// lattice check ------------------------------------------------------------

struct LatticeArgs {
    std::string suite = "covolume";
    std::uint64_t cases = 100;
    int n = 0, r = 0;  // 0: drawn per case
    long long bound = 4;
};

LatticeBasis random_primitive(Stream& rng, int r, int n, long long bound) {
    while (true) {
        IntMatrix rows(r, n);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) rows(i, j) = Integer(rng.uniform(-bound, bound));
        if (exact_rank(rows) != r) continue;
        return LatticeBasis(saturate(rows));
    }
}

int run_lattice_check(const Globals& g, const LatticeArgs& a) {
    Output out(g, "json");
    out.json_only();
    if (a.suite != "covolume" && a.suite != "star" && a.suite != "reduced")
        throw Error(ErrorKind::ContractViolation, "suite must be covolume, star or reduced");
    std::uint64_t failures = 0;
    for (std::uint64_t k = 0; k < a.cases; ++k) {
        Stream rng(g.seed, "cli.lattice", k);
        const int n = a.n ? a.n : static_cast<int>(rng.uniform(2, 6));
        const int r = a.r ? a.r : static_cast<int>(rng.uniform(1, std::min(3, n)));
        if (r < 1 || r > n) throw Error(ErrorKind::ContractViolation, "need 1 <= r <= n");
        LatticeBasis L = random_primitive(rng, r, n, a.bound);
        bool ok = true;
        json rec{{"case", k}, {"n", n}, {"r", r}, {"basis", matrix_json(L.rows)}};
        if (a.suite == "covolume") {
            CovolumeIdentity c = covolume_identity_check(L);
            rec["lhs"] = str(c.lhs);
            rec["rhs"] = str(c.rhs);
            ok = c.holds;
        } else if (a.suite == "star") {
            auto basis = s_lambda_basis(L);
            rec["size"] = basis.size();
            ok = basis.size() == static_cast<std::size_t>(r * (r + 1) / 2);
        } else {
            std::uint64_t budget = g.budget.value_or(10000000);
            ReducedBasis red = reduced_basis(L, budget);
            json lens = json::array(), minima = json::array();
            for (const auto& x : red.squared_lengths) lens.push_back(str(x));
            for (const auto& x : red.minima_squared) minima.push_back(str(x));
            rec["squared_lengths"] = lens;
            rec["minima_squared"] = minima;
            ok = red.basis.rows() == r;
            for (int i = 0; i < r; ++i) ok = ok && red.squared_lengths[i] >= red.minima_squared[i];
            // up to rank 4 the greedy basis realizes the minima, and Minkowski's
            // second theorem gives prod |l_i| <= 2 d(Lambda)
            if (r <= 4) {
                ok = ok && red.squared_lengths == red.minima_squared;
                ok = ok && red.almost_reduced(Rational(2), covolume(L).squared);
            }
        }
        rec["ok"] = ok;
        failures += !ok;
        if (!ok) out.record(rec);
    }
    out.record({{"aggregate", true}, {"suite", a.suite}, {"cases", a.cases}, {"failures", failures}});
    return 0;
}

// census -------------------------------------------------------------------

struct CensusArgs {
    std::string kind;
    int n = 2;
    std::int64_t X = 1;
    std::vector<std::string> sigma;
    std::int64_t shards = 0;
    std::uint64_t samples = 0;
    bool strict = false;
    std::uint64_t prime_bound = 100000;
    std::int64_t m_max = 10;
};

SigmaCondition load_sigma(const std::string& arg, int n) {
    auto colon = arg.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "sigma must be p:file");
    std::int64_t p = 0;
    try {
        p = std::stoll(arg.substr(0, colon));
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "sigma prime is not an integer");
    }
    const std::string path = arg.substr(colon + 1);
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ContractViolation, "cannot open " + path);
    std::vector<std::vector<std::int64_t>> residues;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        std::vector<std::int64_t> r;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                r.push_back(std::stoll(item));
            } catch (const std::exception&) {
                throw Error(ErrorKind::ParseError, "bad residue in " + path);
            }
        }
        if (static_cast<int>(r.size()) != n + 1) throw Error(ErrorKind::ParseError, "residue vector has wrong arity");
        residues.push_back(std::move(r));
    }
    if (residues.empty()) throw Error(ErrorKind::ContractViolation, "sigma file is empty");
    return SigmaCondition::from_residues(p, std::move(residues), path);
}

int run_census_cmd(const Globals& g, const CensusArgs& a) {
    Output out(g, "json");
    out.json_only();
    if (a.kind == "wm") {
        WmCensus wm = wm_tail_census(a.n, a.X, a.m_max, a.strict, g.threads);
        for (const auto& row : wm.rows)
            out.record({{"experiment", "wm"}, {"m", row.m}, {"strong", row.strong}, {"weak", row.weak},
                        {"divisible", row.divisible}});
        out.record({{"experiment", "wm"}, {"aggregate", true}, {"n", wm.n}, {"X", wm.X}, {"total", wm.total},
                    {"zero_disc", wm.zero_disc}, {"max_abs_disc", str(wm.max_abs_disc)}});
        return 0;
    }
    CensusConfig cfg;
    cfg.n = a.n;
    cfg.X = a.X;
    cfg.strict_height = a.strict;
    cfg.threads = g.threads;
    cfg.shards = a.shards ? a.shards : std::max(1, 4 * g.threads);
    cfg.samples = a.samples;
    cfg.seed = g.seed;
    cfg.prime_bound = a.prime_bound;
    if (g.budget) cfg.budget = *g.budget;
    for (const auto& s : a.sigma) cfg.sigma.push_back(load_sigma(s, a.n));
    CensusResult r = run_census(a.kind == "maximal" ? CensusKind::maximal : CensusKind::squarefree, cfg);
    const char* kind = to_string(r.kind);
    for (const auto& s : r.shards)
        out.record({{"experiment", kind}, {"shard", s.shard}, {"total", s.total}, {"favorable", s.favorable},
                    {"unfavorable", s.unfavorable}, {"unknown", s.unknown}});
    json sigma = json::array();
    for (const auto& c : cfg.sigma) sigma.push_back({{"p", c.p}, {"name", c.name}});
    out.record({{"experiment", kind},
                {"aggregate", true},
                {"n", r.n},
                {"X", r.X},
                {"strict_height", r.strict_height},
                {"sampled", r.sampled},
                {"seed", cfg.seed},
                {"sigma", sigma},
                {"total", r.total},
                {"favorable", r.favorable},
                {"unfavorable", r.unfavorable},
                {"unknown", r.unknown},
                {"zero_disc", r.zero_disc},
                {"sigma_pass", r.sigma_pass},
                {"empirical", r.empirical},
                {"reference", r.reference},
                {"reference_value", r.reference_value},
                {"reference_tail", r.reference_tail},
                {"sigma_factor", str(r.sigma_factor)},
                {"deviation", r.empirical - r.reference}});
    return 0;
}

// mine ---------------------------------------------------------------------

struct MineArgs {
    int n = 3;
    std::int64_t X = 1;
    bool require_sn = false;
    bool inject = false;
};

int run_mine(const Globals& g, const MineArgs& a) {
    Output out(g, "json");
    out.json_only();
    MinerOptions o;
    o.require_sn = a.require_sn;
    o.threads = g.threads;
    o.inject_duplicate = a.inject;
    MinerResult r = field_miner(a.n, a.X, o);
    for (std::size_t c = 0; c < r.twin_classes.size(); ++c)
        for (std::size_t i : r.twin_classes[c])
            out.record({{"experiment", "mine"},
                        {"form", r.accepted[i].str()},
                        {"disc", str(discriminant(r.accepted[i]))},
                        {"class", c}});
    out.record({{"experiment", "mine"},
                {"aggregate", true},
                {"n", r.n},
                {"X", r.X},
                {"scanned", r.scanned},
                {"squarefree", r.squarefree},
                {"accepted", r.accepted.size()},
                {"dropped_uncertain", r.dropped_uncertain},
                {"rejected_sn", r.rejected_sn},
                {"distinct_field_lower_bound", r.distinct_field_lower_bound},
                {"audit",
                 {{"passed", r.audit.passed},
                  {"pairs", r.audit.pairs},
                  {"identical_pairs", r.audit.identical_pairs},
                  {"twin_pairs", r.audit.twin_pairs},
                  {"distinct_pairs", r.audit.distinct_pairs},
                  {"recheck_failures", r.audit.recheck_failures},
                  {"notes", r.audit.notes}}}});
    return r.audit.passed ? 0 : 1;
}

void error_record(const char* kind, const std::string& message) {
    std::cout << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"binform: binary forms, local densities, pencils, lattices and censuses"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals g;
    app.add_option("--seed", g.seed, "64-bit seed (default 0)");
    app.add_option("--threads", g.threads, "worker threads (default BINFORM_THREADS or the core count)");
    app.add_option("--budget", g.budget, "work budget for enumerations");
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));

    DensityArgs da;
    auto* density = app.add_subcommand("density", "local densities and Euler products");
    density->add_option("quantity", da.kind)->required()->check(CLI::IsMember({"alpha", "beta", "nu", "constant"}));
    density->add_option("--n", da.n, "degree");
    density->add_option("--p", da.p, "prime");
    density->add_option("--j", da.j, "valuation for nu (0 or 1)");
    density->add_flag("--exact", da.exact, "exhaustive enumeration only");
    density->add_flag("--formula", da.formula, "closed form only");
    density->add_flag("--both", da.both, "both, with match");
    density->add_option("--variant", da.variant, "stated or corrected closed form");
    density->add_option("--kind", da.constant_kind, "squarefree or maximal (constant)");
    density->add_option("--primes", da.primes, "prime bound (constant)");

    LiftArgs la;
    auto* lift = app.add_subcommand("lift", "sigma_m lift of a weakly divisible form");
    std::string lift_action;
    lift->add_option("action", lift_action)->required()->check(CLI::IsMember({"sigma"}));
    lift->add_option("--form", la.form, "n:a0,...,an")->required();
    lift->add_option("--m", la.m, "squarefree m");
    lift->add_flag("--even", la.even, "even degree lift into W1");

    std::string pencil_file;
    std::string pencil_action;
    auto* pencil = app.add_subcommand("pencil", "streaming pencil verification");
    pencil->add_option("action", pencil_action)->required()->check(CLI::IsMember({"check"}));
    pencil->add_option("--file", pencil_file, "JSON lines {n, A, B} with lower triangles")->required();

    CountArgs ca;
    std::string count_action;
    auto* count = app.add_subcommand("count", "rank-r integral symmetric matrices in a skewed box");
    count->add_option("action", count_action)->required()->check(CLI::IsMember({"rank-sym"}));
    count->add_option("--n", ca.n)->required();
    count->add_option("--r", ca.r)->required();
    count->add_option("--Y", ca.Y, "rational Y")->required();
    count->add_option("--t", ca.t, "t1,...,tn (default all 1)");
    count->add_flag("--brute-force", ca.brute, "skip the fast paths");

    LatticeArgs lta;
    std::string lattice_action;
    auto* lattice = app.add_subcommand("lattice", "lattice identity suites");
    lattice->add_option("action", lattice_action)->required()->check(CLI::IsMember({"check"}));
    lattice->add_option("--suite", lta.suite)->check(CLI::IsMember({"covolume", "star", "reduced"}));
    lattice->add_option("--cases", lta.cases);
    lattice->add_option("--n", lta.n, "ambient dimension (default random 2..6)");
    lattice->add_option("--r", lta.r, "rank (default random)");
    lattice->add_option("--bound", lta.bound, "entry bound of the random generators");

    CensusArgs cea;
    auto* census = app.add_subcommand("census", "height-box censuses");
    census->add_option("kind", cea.kind)->required()->check(CLI::IsMember({"squarefree", "maximal", "wm"}));
    census->add_option("--n", cea.n)->required();
    census->add_option("--height", cea.X)->required();
    census->add_option("--sigma", cea.sigma, "p:file of allowed residues mod p^2, one a0,...,an per line");
    census->add_option("--shards", cea.shards);
    census->add_option("--samples", cea.samples, "uniform samples instead of the full box");
    census->add_flag("--strict", cea.strict, "|a_i| < X instead of <= X");
    census->add_option("--prime-bound", cea.prime_bound, "Euler product truncation");
    census->add_option("--m-max", cea.m_max, "largest m (wm)");

    MineArgs ma;
    std::string mine_action;
    auto* mine = app.add_subcommand("mine", "strongly reduced field miner");
    mine->add_option("action", mine_action)->required()->check(CLI::IsMember({"fields"}));
    mine->add_option("--n", ma.n)->required();
    mine->add_option("--height", ma.X)->required();
    mine->add_flag("--require-sn", ma.require_sn);
    mine->add_flag("--inject-duplicate", ma.inject, "audit self-test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }
    if (g.threads <= 0) g.threads = default_threads();

    try {
        if (*density) return run_density(g, da);
        if (*lift) return run_lift(g, la);
        if (*pencil) return run_pencil_check(g, pencil_file);
        if (*count) return run_count(g, ca);
        if (*lattice) return run_lattice_check(g, lta);
        if (*census) return run_census_cmd(g, cea);
        if (*mine) return run_mine(g, ma);
    } catch (const Error& e) {
        error_record(to_string(e.kind()), e.what());
        return e.kind() == ErrorKind::BudgetExceeded ? 2 : 1;
    } catch (const std::exception& e) {
        error_record("InternalError", e.what());
        return 1;
    }
    return 1;
}
