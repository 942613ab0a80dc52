#include "sopq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "sopq/acceptance.hpp"
#include "sopq/dist.hpp"
#include "sopq/horn.hpp"
#include "sopq/quadrature.hpp"
#include "sopq/spherical.hpp"

namespace sopq {

namespace {

using nlohmann::json;
using Cell = std::variant<double, long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void emit(const Table& t, const std::string& format, std::ostream& out) {
    if (format == "json") {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json o = json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                std::visit([&](const auto& v) { o[t.columns[i]] = v; }, r[i]);
            }
            rows.push_back(std::move(o));
        }
        out << json{{"rows", rows}}.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            if (const auto* d = std::get_if<double>(&r[i])) out << fmt_double(*d);
            else if (const auto* l = std::get_if<long>(&r[i])) out << *l;
            else out << csv_escape(std::get<std::string>(r[i]));
        }
        out << '\n';
    }
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(std::string("cannot parse ") + what + " value '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

Complex parse_sigma(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() == 1) return {parse_double(parts[0], "--sigma"), 0.0};
    if (parts.size() == 2) return {parse_double(parts[0], "--sigma"), parse_double(parts[1], "--sigma")};
    throw ValidationError("--sigma expects re or re,im");
}

std::vector<double> parse_alpha(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() == 1) {
        const double a = parse_double(parts[0], "--alpha");
        if (a < 0.0) throw DomainError("--alpha start must be >= 0");
        return {a};
    }
    if (parts.size() != 3) throw ValidationError("--alpha expects start:stop:count");
    const double a = parse_double(parts[0], "--alpha"), b = parse_double(parts[1], "--alpha");
    const double c = parse_double(parts[2], "--alpha");
    if (c < 1.0 || c != std::floor(c)) throw ValidationError("--alpha count must be a positive integer");
    if (a < 0.0 || b < 0.0) throw DomainError("--alpha values must be >= 0");
    const auto n = static_cast<int>(c);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(parse_double(p, what));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int error_class(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const InputError&) {
        return kExitInput;
    } catch (const NumericalError&) {
        return kExitNumerical;
    } catch (...) {
        return kExitNumerical;
    }
}

// Evaluates rows on worker threads; results land in input order.
template <class Fn>
std::vector<std::pair<std::vector<Cell>, int>> run_rows(std::size_t count, Fn fn) {
    std::vector<std::pair<std::vector<Cell>, int>> out(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
    };
    const std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

struct GridOptions {
    int p = 3;
    int q = 2;
    std::vector<std::string> sigma_raw;
    std::string alpha_raw = "0.5";
    double tol = -1.0;
    std::string format = "csv";
    std::string group;
    std::string method = "series";
    int nu = 0, r = 0, s = 0;
    int oracle_n = 32;
    bool corrupt = false;
};

struct GridPoint {
    GroupSignature sig;
    Complex sigma;
    double alpha;
};

std::vector<GridPoint> grid_of(const GridOptions& o, GroupSignature sig) {
    std::vector<Complex> sigmas;
    for (const auto& s : o.sigma_raw) sigmas.push_back(parse_sigma(s));
    if (sigmas.empty()) sigmas.push_back(principal_sigma(sig, 0.0));
    const auto alphas = parse_alpha(o.alpha_raw);
    std::vector<GridPoint> pts;
    for (const auto& s : sigmas)
        for (double a : alphas) pts.push_back({sig, s, a});
    return pts;
}

SpecialGroup parse_group(const std::string& g) {
    if (g == "so41") return SpecialGroup::SO41;
    if (g == "so32") return SpecialGroup::SO32;
    if (g == "so42") return SpecialGroup::SO42;
    throw ValidationError("unknown --group '" + g + "'");
}

int worst_code(const std::vector<std::pair<std::vector<Cell>, int>>& rows) {
    int code = kExitOk;
    for (const auto& r : rows) code = std::max(code, r.second);
    return code;
}

std::string what_of(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown error";
    }
}

SeriesValue zonal_value(const GridOptions& o, const GridPoint& pt, SeriesControl ctl) {
    if (!o.group.empty()) return zonal_special(parse_group(o.group), pt.sigma, pt.alpha, ctl);
    if (o.method == "series") return zonal_series(pt.sig, pt.sigma, pt.alpha, ctl);
    if (o.method == "horn") return zonal_horn(pt.sig, pt.sigma, pt.alpha, ZonalHornForm::pq, {ctl.tol, 1'000'000});
    if (o.method == "horn-qp") return zonal_horn(pt.sig, pt.sigma, pt.alpha, ZonalHornForm::qp, {ctl.tol, 1'000'000});
    if (o.method == "horn-five")
        return zonal_horn(pt.sig, pt.sigma, pt.alpha, ZonalHornForm::five, {ctl.tol, 1'000'000});
    if (o.method == "q1") {
        if (pt.sig.q != 1) throw DomainError("--method q1 needs q = 1");
        return {zonal_q1(pt.sig.p, pt.sigma, pt.alpha), 0.0, 0, true};
    }
    if (o.method == "oracle") {
        const auto v = zonal_oracle_converged(pt.sig, pt.sigma, pt.alpha, o.oracle_n);
        return {v.value, v.change, static_cast<std::size_t>(v.nodes), true};
    }
    throw ValidationError("unknown --method '" + o.method + "'");
}

SeriesValue assoc_value(const GridOptions& o, const GridPoint& pt, SeriesControl ctl) {
    const AssocIndex idx{o.nu, o.r, o.s};
    if (o.method == "series") return assoc_series(pt.sig, pt.sigma, idx, pt.alpha, ctl);
    if (o.method == "horn") return assoc_horn(pt.sig, pt.sigma, idx, pt.alpha, {ctl.tol, 1'000'000});
    if (o.method == "oracle") {
        const auto v = assoc_oracle_converged(pt.sig, pt.sigma, idx.lambda(), idx.mu(), pt.alpha, o.oracle_n);
        return {v.value, v.change, static_cast<std::size_t>(v.nodes), true};
    }
    throw ValidationError("unknown --method '" + o.method + "'");
}

GroupSignature signature_for(const GridOptions& o) {
    return o.group.empty() ? GroupSignature(o.p, o.q) : signature_of(parse_group(o.group));
}

int cmd_zonal(const GridOptions& o, bool assoc, std::ostream& out) {
    const GroupSignature sig = signature_for(o);
    const auto pts = grid_of(o, sig);
    const SeriesControl ctl{o.tol > 0 ? o.tol : kSphericalControl.tol, kSphericalControl.max_terms};
    if (assoc) {
        if (sig.q < 2) throw DomainError("associated functions need q >= 2");
        if (o.nu < 0 || o.nu > 1 || o.r < 0 || o.s < 0) throw DomainError("need nu in {0,1}, r, s >= 0");
    }
    Table t;
    t.columns = {"p", "q"};
    if (assoc) t.columns.insert(t.columns.end(), {"nu", "r", "s", "lambda", "mu"});
    t.columns.insert(t.columns.end(), {"sigma_re", "sigma_im", "alpha", "re", "im", "tail_estimate", "terms_used", "error"});
    auto rows = run_rows(pts.size(), [&](std::size_t i) -> std::pair<std::vector<Cell>, int> {
        const auto& pt = pts[i];
        std::vector<Cell> row = {static_cast<long>(pt.sig.p), static_cast<long>(pt.sig.q)};
        if (assoc) {
            const AssocIndex idx{o.nu, o.r, o.s};
            row.insert(row.end(), {static_cast<long>(o.nu), static_cast<long>(o.r), static_cast<long>(o.s),
                                   static_cast<long>(idx.lambda()), static_cast<long>(idx.mu())});
        }
        row.insert(row.end(), {pt.sigma.real(), pt.sigma.imag(), pt.alpha});
        try {
            const auto v = assoc ? assoc_value(o, pt, ctl) : zonal_value(o, pt, ctl);
            row.insert(row.end(), {v.value.real(), v.value.imag(), v.tail_estimate,
                                   static_cast<long>(v.terms_used), std::string()});
            return {row, kExitOk};
        } catch (...) {
            const auto e = std::current_exception();
            row.insert(row.end(), {NAN, NAN, NAN, 0L, what_of(e)});
            return {row, error_class(e)};
        }
    });
    for (auto& r : rows) t.rows.push_back(r.first);
    emit(t, o.format, out);
    return worst_code(rows);
}

int cmd_compare(const GridOptions& o, bool assoc, std::ostream& out) {
    const GroupSignature sig = signature_for(o);
    const auto pts = grid_of(o, sig);
    const double tol = o.tol > 0 ? o.tol : 1e-8;
    if (assoc && sig.q < 2) throw DomainError("associated functions need q >= 2");
    Table t;
    t.columns = {"p", "q"};
    if (assoc) t.columns.insert(t.columns.end(), {"lambda", "mu"});
    t.columns.insert(t.columns.end(), {"sigma_re", "sigma_im", "alpha", "series_re", "series_im", "oracle_re",
                                       "oracle_im", "abs_diff", "rel_diff", "oracle_nodes", "error"});
    std::atomic<bool> violated{false};
    auto rows = run_rows(pts.size(), [&](std::size_t i) -> std::pair<std::vector<Cell>, int> {
        const auto& pt = pts[i];
        const AssocIndex idx{o.nu, o.r, o.s};
        std::vector<Cell> row = {static_cast<long>(pt.sig.p), static_cast<long>(pt.sig.q)};
        if (assoc) row.insert(row.end(), {static_cast<long>(idx.lambda()), static_cast<long>(idx.mu())});
        row.insert(row.end(), {pt.sigma.real(), pt.sigma.imag(), pt.alpha});
        try {
            GridOptions so = o;
            so.method = "series";
            Complex s = assoc ? assoc_value(so, pt, kSphericalControl).value : zonal_value(so, pt, kSphericalControl).value;
            if (o.corrupt) s *= 1.0 + 1e-6;
            const OracleValue ov = assoc ? assoc_oracle_converged(pt.sig, pt.sigma, idx.lambda(), idx.mu(), pt.alpha, o.oracle_n)
                                         : zonal_oracle_converged(pt.sig, pt.sigma, pt.alpha, o.oracle_n);
            const double ad = std::abs(s - ov.value);
            const double rd = std::abs(ov.value) > 0 ? ad / std::abs(ov.value) : ad;
            if (!(rd <= tol)) violated = true;
            row.insert(row.end(), {s.real(), s.imag(), ov.value.real(), ov.value.imag(), ad, rd,
                                   static_cast<long>(ov.nodes), std::string()});
            return {row, kExitOk};
        } catch (...) {
            const auto e = std::current_exception();
            row.insert(row.end(), {NAN, NAN, NAN, NAN, NAN, NAN, 0L, what_of(e)});
            return {row, error_class(e)};
        }
    });
    for (auto& r : rows) t.rows.push_back(r.first);
    emit(t, o.format, out);
    const int code = worst_code(rows);
    if (code != kExitOk) return code;
    return violated ? kExitTolerance : kExitOk;
}

int cmd_horn(const std::string& path, const std::string& x_raw, double tol, std::size_t max_terms,
             const std::string& format, std::ostream& out, std::ostream& err) {
    const HornSeriesSpec spec = parse_spec(read_file(path));
    const auto rep = validate_spec(spec);
    if (!rep.valid) {
        err << "spec failed validation:\n" << rep.describe();
        return kExitInput;
    }
    std::vector<double> x = x_raw.empty() ? std::vector<double>(static_cast<std::size_t>(spec.variables), 0.0)
                                          : parse_list(x_raw, "--x");
    if (x.size() == 1 && spec.variables > 1) x.assign(static_cast<std::size_t>(spec.variables), x[0]);
    const auto v = evaluate_horn(spec, x, {tol, max_terms});
    if (format == "json") {
        out << json{{"re", v.value.real()}, {"im", v.value.imag()}, {"tail_estimate", v.tail_estimate},
                    {"terms_used", v.terms_used}, {"converged", v.converged}}
                   .dump(2)
            << '\n';
    } else {
        out << "re,im,tail_estimate,terms_used\n"
            << fmt_double(v.value.real()) << ',' << fmt_double(v.value.imag()) << ','
            << fmt_double(v.tail_estimate) << ',' << v.terms_used << '\n';
    }
    return kExitOk;
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("matrix file: ") + e.what());
    }
    if (doc.is_object() && doc.contains("beta")) doc = doc["beta"];
    if (!doc.is_array() || doc.empty()) throw ValidationError("matrix file: expected a k x k array");
    const auto k = static_cast<Eigen::Index>(doc.size());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto& row = doc[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) {
            throw ValidationError("matrix file: expected a k x k array");
        }
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!row[static_cast<std::size_t>(j)].is_number()) throw ValidationError("matrix file: non-numeric entry");
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
        }
    }
    return m;
}

int cmd_dist(const std::string& path, const std::string& orders_raw, std::ostream& out) {
    const Eigen::MatrixXd beta = parse_matrix(read_file(path));
    MultiIndex q;
    for (double v : parse_list(orders_raw, "--orders")) {
        if (v < 0 || v != std::floor(v)) throw ValidationError("--orders must be nonnegative integers");
        q.push_back(static_cast<int>(v));
    }
    if (static_cast<Eigen::Index>(q.size()) != beta.rows()) {
        throw ValidationError("--orders needs one entry per matrix row");
    }
    const double det = checked_det(beta);
    json terms = json::array();
    for (const auto& [p, c] : transform_coefficients(beta, q)) terms.push_back({{"p", p}, {"coeff", c}});
    out << json{{"det_beta", det}, {"terms", terms}}.dump(2) << '\n';
    return kExitOk;
}

const char* kColumnsHelp = R"(CSV columns (json uses the same keys):
  zonal:   p,q,sigma_re,sigma_im,alpha,re,im,tail_estimate,terms_used,error
  assoc:   p,q,nu,r,s,lambda,mu,sigma_re,sigma_im,alpha,re,im,tail_estimate,terms_used,error
  compare: p,q[,lambda,mu],sigma_re,sigma_im,alpha,series_re,series_im,oracle_re,oracle_im,
           abs_diff,rel_diff,oracle_nodes,error
Exit codes: 0 ok, 1 tolerance violation, 2 input/validation error, 3 numerical failure.)";

void add_grid_flags(CLI::App* cmd, GridOptions& o) {
    cmd->add_option("--p", o.p, "p of SO0(p,q)");
    cmd->add_option("--q", o.q, "q of SO0(p,q)");
    cmd->add_option("--sigma", o.sigma_raw, "sigma as re or re,im (repeatable; default: principal line, t=0)")
        ->take_all()
        ->allow_extra_args(false);
    cmd->add_option("--alpha", o.alpha_raw, "alpha as value or start:stop:count");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_index_flags(CLI::App* cmd, GridOptions& o) {
    cmd->add_option("--nu", o.nu, "nu in {0,1}");
    cmd->add_option("--r", o.r, "r >= 0");
    cmd->add_option("--s", o.s, "s >= 0");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sopq: SO0(p,q) spherical functions, Horn series, delta-transform tables"};
    app.footer(kColumnsHelp);
    app.require_subcommand(1);

    GridOptions zo, ao, co;
    auto* zonal = app.add_subcommand("zonal", "zonal function over a (sigma, alpha) grid");
    add_grid_flags(zonal, zo);
    zonal->add_option("--tol", zo.tol, "series tolerance");
    zonal->add_option("--group", zo.group, "so41, so32 or so42 (closed forms)");
    zonal->add_option("--method", zo.method, "series, horn, horn-qp, horn-five, q1 or oracle");
    zonal->add_option("--oracle-n", zo.oracle_n, "starting node count for --method oracle");

    auto* assoc = app.add_subcommand("assoc", "associated function over a (sigma, alpha) grid");
    add_grid_flags(assoc, ao);
    add_index_flags(assoc, ao);
    assoc->add_option("--tol", ao.tol, "series tolerance");
    assoc->add_option("--method", ao.method, "series, horn or oracle");
    assoc->add_option("--oracle-n", ao.oracle_n, "starting node count for --method oracle");

    auto* compare = app.add_subcommand("compare", "series against the quadrature oracle");
    add_grid_flags(compare, co);
    add_index_flags(compare, co);
    compare->add_option("--tol", co.tol, "relative tolerance (default 1e-8)");
    compare->add_option("--group", co.group, "so41, so32 or so42");
    compare->add_option("--oracle-n", co.oracle_n, "starting node count (doubled until converged)");
    compare->add_flag("--debug-corrupt-series", co.corrupt, "perturb the series by 1e-6 (harness check)");

    std::string horn_path, horn_x, horn_format = "csv";
    double horn_tol = 1e-15;
    std::size_t horn_max = 1'000'000;
    auto* horn = app.add_subcommand("horn", "evaluate a Horn series spec file");
    horn->add_option("spec", horn_path, "JSON spec file")->required();
    horn->add_option("--x", horn_x, "arguments x1,x2,... (one value is broadcast)");
    horn->add_option("--tol", horn_tol, "series tolerance");
    horn->add_option("--max-terms", horn_max, "lattice point budget");
    horn->add_option("--format", horn_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string dist_path, dist_orders;
    auto* dist = app.add_subcommand("dist", "delta-derivative transformation coefficients (JSON)");
    dist->add_option("beta", dist_path, "JSON k x k matrix (array of rows, or {\"beta\": ...})")->required();
    dist->add_option("--orders", dist_orders, "q1,...,qk")->required();

    auto* selftest = app.add_subcommand("selftest", "run the acceptance grid");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (zonal->parsed()) return cmd_zonal(zo, false, out);
        if (assoc->parsed()) return cmd_zonal(ao, true, out);
        if (compare->parsed()) {
            const bool indexed = compare->count("--nu") + compare->count("--r") + compare->count("--s") > 0;
            return cmd_compare(co, indexed, out);
        }
        if (horn->parsed()) return cmd_horn(horn_path, horn_x, horn_tol, horn_max, horn_format, out, err);
        if (dist->parsed()) return cmd_dist(dist_path, dist_orders, out);
        if (selftest->parsed()) {
            const auto results = run_acceptance(out);
            int failed = 0;
            for (const auto& r : results) failed += r.pass ? 0 : 1;
            out << (failed == 0 ? "selftest: all " : "selftest: ") << (results.size() - failed) << "/"
                << results.size() << " passed\n";
            return failed == 0 ? kExitOk : kExitTolerance;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitInput;
}

} // namespace sopq
