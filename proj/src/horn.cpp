#include "sopq/horn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace sopq {

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (const auto& p : problems) {
        os << "structure: " << p << '\n';
    }
    for (const auto& b : balance) {
        os << "variable " << b.variable << ": sum(u) = " << b.numerator_sum
           << ", sum(v) + 1 = " << b.denominator_sum + 1 << (b.ok ? "  ok" : "  UNBALANCED") << '\n';
    }
    return os.str();
}

ValidationReport validate_spec(const HornSeriesSpec& spec) {
    ValidationReport rep;
    if (spec.variables < 1) {
        rep.problems.push_back("variables must be >= 1");
        return rep;
    }
    const auto r = static_cast<std::size_t>(spec.variables);
    auto check_rows = [&](const std::vector<HornParameter>& ps, const char* side) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (ps[i].row.size() != r) {
                rep.problems.push_back(std::string(side) + " parameter " + std::to_string(i) +
                                       ": row length " + std::to_string(ps[i].row.size()) +
                                       " != " + std::to_string(r));
                continue;
            }
            for (int u : ps[i].row) {
                if (u < -1 || u > 2) {
                    rep.problems.push_back(std::string(side) + " parameter " + std::to_string(i) +
                                           ": coefficient " + std::to_string(u) +
                                           " outside {-1,0,1,2}");
                }
            }
            if (!std::isfinite(ps[i].value.real()) || !std::isfinite(ps[i].value.imag())) {
                rep.problems.push_back(std::string(side) + " parameter " + std::to_string(i) +
                                       ": non-finite value");
            }
        }
    };
    check_rows(spec.numerator, "numerator");
    check_rows(spec.denominator, "denominator");
    if (!rep.problems.empty()) {
        return rep;
    }
    bool all_ok = true;
    for (std::size_t j = 0; j < r; ++j) {
        BalanceEntry e;
        e.variable = static_cast<int>(j);
        for (const auto& p : spec.numerator) e.numerator_sum += p.row[j];
        for (const auto& p : spec.denominator) e.denominator_sum += p.row[j];
        e.ok = e.numerator_sum == e.denominator_sum + 1;
        all_ok = all_ok && e.ok;
        rep.balance.push_back(e);
    }
    rep.valid = all_ok;
    return rep;
}

namespace {

bool param_less(const HornParameter& a, const HornParameter& b) {
    return std::forward_as_tuple(a.value.real(), a.value.imag(), a.row) <
           std::forward_as_tuple(b.value.real(), b.value.imag(), b.row);
}

// A term kept as mantissa · 0^{nz} / 0^{dz} so that factors crossing zero can
// be restored when a -1 coefficient steps back over them.
struct Term {
    Complex mant = 1.0;
    int nz = 0;
    int dz = 0;
};

class ShellWalker {
public:
    ShellWalker(const HornSeriesSpec& spec, const std::vector<double>& x) : spec_(spec), x_(x) {
        auto rep = validate_spec(spec_);
        if (!rep.valid) {
            throw ValidationError("invalid Horn spec:\n" + rep.describe());
        }
        if (x_.size() != static_cast<std::size_t>(spec_.variables)) {
            throw DomainError("argument vector length does not match the number of variables");
        }
        std::sort(spec_.numerator.begin(), spec_.numerator.end(), param_less);
        std::sort(spec_.denominator.begin(), spec_.denominator.end(), param_less);
        shell_[std::vector<int>(x_.size(), 0)] = Term{};
    }

    // Highest nonzero degree if some numerator (-N, row > 0) forces termination.
    long termination_degree() const {
        long best = -1;
        for (const auto& p : spec_.numerator) {
            const bool positive = std::all_of(p.row.begin(), p.row.end(), [](int u) { return u > 0; });
            if (positive && is_nonpositive_integer(p.value)) {
                const long n = static_cast<long>(-p.value.real());
                best = best < 0 ? n : std::min(best, n);
            }
        }
        return best;
    }

    unsigned degree() const { return degree_; }
    std::size_t points() const { return points_; }

    Complex current_sum() const {
        Complex s = 0.0;
        for (const auto& [n, t] : shell_) {
            s += value(t);
        }
        return s;
    }

    void advance() {
        std::map<std::vector<int>, Term> next;
        const std::size_t r = x_.size();
        // Each point of the new shell is reached from its parent n - e_j with
        // j the first nonzero index; lexicographic map order fixes the sum order.
        for (const auto& [n, t] : shell_) {
            const std::size_t first = first_nonzero(n);
            for (std::size_t j = 0; j < r; ++j) {
                if (j > first) break;
                std::vector<int> child = n;
                ++child[j];
                next.emplace(std::move(child), step(n, t, j));
            }
        }
        shell_ = std::move(next);
        points_ += shell_.size();
        ++degree_;
    }

private:
    static std::size_t first_nonzero(const std::vector<int>& n) {
        for (std::size_t j = 0; j < n.size(); ++j) {
            if (n[j] != 0) return j;
        }
        return n.size();
    }

    static Complex value(const Term& t) {
        if (t.nz > 0) return 0.0;
        if (t.dz > 0) {
            throw PoleError("Horn series: denominator Pochhammer vanishes at a lattice point");
        }
        return t.mant;
    }

    static int dot(const std::vector<int>& row, const std::vector<int>& n) {
        int k = 0;
        for (std::size_t i = 0; i < n.size(); ++i) k += row[i] * n[i];
        return k;
    }

    // (a)_{k} -> (a)_{k+u}
    static void shift(Term& t, Complex a, int k, int u, bool numerator) {
        auto mul = [&](Complex f) {
            if (f == 0.0) {
                (numerator ? t.nz : t.dz) += 1;
            } else if (numerator) {
                t.mant *= f;
            } else {
                t.mant /= f;
            }
        };
        auto div = [&](Complex f) {
            if (f == 0.0) {
                (numerator ? t.nz : t.dz) -= 1;
            } else if (numerator) {
                t.mant /= f;
            } else {
                t.mant *= f;
            }
        };
        for (int i = 0; i < u; ++i) {
            mul(a + static_cast<double>(k + i));
        }
        for (int i = 0; i > u; --i) {
            div(a + static_cast<double>(k + i - 1));
        }
    }

    Term step(const std::vector<int>& n, const Term& parent, std::size_t j) const {
        Term t = parent;
        for (const auto& p : spec_.numerator) {
            shift(t, p.value, dot(p.row, n), p.row[j], true);
        }
        for (const auto& p : spec_.denominator) {
            shift(t, p.value, dot(p.row, n), p.row[j], false);
        }
        t.mant *= x_[j] / static_cast<double>(n[j] + 1);
        if (!std::isfinite(t.mant.real()) || !std::isfinite(t.mant.imag())) {
            throw OverflowError("Horn series: term overflow");
        }
        return t;
    }

    HornSeriesSpec spec_;
    std::vector<double> x_;
    std::map<std::vector<int>, Term> shell_;
    unsigned degree_ = 0;
    std::size_t points_ = 1;
};

} // namespace

SeriesValue evaluate_horn(const HornSeriesSpec& spec, const std::vector<double>& x,
                          SeriesControl ctl) {
    ShellWalker walker(spec, x);
    const long last = walker.termination_degree();
    if (last < 0) {
        for (double xi : x) {
            if (!(std::abs(xi) < 1.0)) {
                throw DomainError("Horn series: |x_i| < 1 required for a non-terminating spec");
            }
        }
    }
    Complex sum = walker.current_sum();
    if (last >= 0) {
        while (static_cast<long>(walker.degree()) < last) {
            walker.advance();
            if (walker.points() > ctl.max_terms) {
                throw NonConvergenceError("Horn series: term budget exhausted");
            }
            sum += walker.current_sum();
        }
        return {require_finite(sum, "Horn series"), 0.0, walker.points(), true};
    }
    TailMonitor monitor(ctl.tol);
    while (true) {
        walker.advance();
        if (walker.points() > ctl.max_terms) {
            throw NonConvergenceError("Horn series: term budget exhausted");
        }
        const Complex shell = walker.current_sum();
        sum += shell;
        require_finite(sum, "Horn series");
        if (monitor.add(shell, sum)) {
            return {sum, monitor.tail_estimate(sum), walker.points(), true};
        }
    }
}

Complex shell_terms(const HornSeriesSpec& spec, const std::vector<double>& x, unsigned degree) {
    ShellWalker walker(spec, x);
    while (walker.degree() < degree) {
        walker.advance();
    }
    return walker.current_sum();
}

namespace {

using nlohmann::json;

std::vector<HornParameter> read_params(const json& doc, const char* key, int r) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw ValidationError(std::string("Horn spec: missing array '") + key + "'");
    }
    std::vector<HornParameter> out;
    for (const auto& e : doc[key]) {
        if (!e.is_object() || !e.contains("re") || !e.contains("row")) {
            throw ValidationError(std::string("Horn spec: entries of '") + key +
                                  "' need 're' and 'row'");
        }
        HornParameter p;
        const double im = e.contains("im") ? e["im"].get<double>() : 0.0;
        p.value = Complex(e["re"].get<double>(), im);
        p.row = e["row"].get<std::vector<int>>();
        if (static_cast<int>(p.row.size()) != r) {
            throw ValidationError(std::string("Horn spec: row length mismatch in '") + key + "'");
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace

HornSeriesSpec parse_spec(const std::string& text) {
    try {
        const json doc = json::parse(text);
        HornSeriesSpec spec;
        spec.variables = doc.at("variables").get<int>();
        if (spec.variables < 1) {
            throw ValidationError("Horn spec: variables must be >= 1");
        }
        spec.numerator = read_params(doc, "numerator", spec.variables);
        spec.denominator = read_params(doc, "denominator", spec.variables);
        return spec;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("Horn spec: ") + e.what());
    }
}

std::string format_spec(const HornSeriesSpec& spec) {
    json doc;
    doc["variables"] = spec.variables;
    auto dump = [](const std::vector<HornParameter>& ps) {
        json arr = json::array();
        for (const auto& p : ps) {
            arr.push_back({{"re", p.value.real()}, {"im", p.value.imag()}, {"row", p.row}});
        }
        return arr;
    };
    doc["numerator"] = dump(spec.numerator);
    doc["denominator"] = dump(spec.denominator);
    return doc.dump(2);
}

} // namespace sopq
