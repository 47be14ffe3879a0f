#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "starcalc/actions.hpp"
#include "starcalc/discretize.hpp"
#include "starcalc/inverse.hpp"
#include "starcalc/kernel_spec.hpp"
#include "starcalc/seminorms.hpp"
#include "starcalc/solvers.hpp"

namespace {

using nlohmann::json;
using namespace starcalc;

constexpr int kExitOk = 0;
constexpr int kExitUserError = 1;
constexpr int kExitNumerical = 2;

struct Options {
    std::string out = "starcalc_out";
    int grid = 64;
    double tol = 1e-9;
    int kmax = 12;
    std::uint64_t seed = 0x5eedULL;
    std::vector<double> domain;  // optional [lo, hi] override for fn inputs
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError(path, "cannot open file");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw SpecError(path, "malformed JSON");
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

// RFC-4180: CRLF rows, header first; every numeric cell printed at %.17g.
class Csv {
  public:
    explicit Csv(std::vector<std::string> header) {
        for (size_t i = 0; i < header.size(); ++i)
            row_ << (i ? "," : "") << header[i];
        rows_.push_back(row_.str());
        row_.str("");
    }
    void add(const std::vector<double>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) row_ << (i ? "," : "") << fmt(cells[i]);
        rows_.push_back(row_.str());
        row_.str("");
    }
    std::string str() const {
        std::string out;
        for (const auto& r : rows_) out += r + "\r\n";
        return out;
    }

  private:
    std::ostringstream row_;
    std::vector<std::string> rows_;
};

UnivariateFn parse_fn_field(const json& j, const char* field, Interval dom,
                            const std::string& path) {
    if (!j.contains(field)) throw SpecError(path + "." + field, "missing");
    // reuse the kernel parser by wrapping the function as a rank-1 Theta term
    json wrapper = {
        {"domain", {dom.lo, dom.hi}},
        {"terms",
         {{{"order", -1},
           {"coeff",
            {{"separable", {{{"a", j[field]}, {"b", {{"builtin", "one"}}}}}}}}}}}};
    StarElement e = parse_kernel_spec(wrapper);
    const SeparableFn c = e.part(-1);
    return c.terms().at(0).a;
}

void validate_domain(const Interval& dom, const Options& opt) {
    if (opt.domain.empty()) return;
    if (dom.lo != opt.domain[0] || dom.hi != opt.domain[1])
        throw SpecError("domain", "spec domain [" + fmt(dom.lo) + ", " + fmt(dom.hi) +
                                      "] does not match --domain");
}

Interval parse_domain(const json& j, const std::string& path) {
    if (!j.contains("domain")) throw SpecError(path + ".domain", "missing");
    const json& d = j["domain"];
    if (!d.is_array() || d.size() != 2) throw SpecError(path + ".domain", "expected [lo, hi]");
    return Interval(d[0].get<double>(), d[1].get<double>());
}

// Theta-part values on an n x n grid plus a sidecar of Dirac diagonal traces.
void emit_grids(const StarElement& d, const Options& opt) {
    const Interval dom = d.domain();
    Csv theta({"x", "y", "re", "im"});
    const SeparableFn c = d.part(-1);
    for (int i = 0; i < opt.grid; ++i)
        for (int j = 0; j < opt.grid; ++j) {
            const double x = dom.lo + dom.length() * double(i) / double(opt.grid - 1);
            const double y = dom.lo + dom.length() * double(j) / double(opt.grid - 1);
            const complexd v = (x >= y) ? c.eval(x, y) : complexd(0.0);
            theta.add({x, y, v.real(), v.imag()});
        }
    write_text(opt.out + ".csv", theta.str());

    Csv dirac({"order", "x", "re", "im"});
    for (const auto& [order, coeff] : d.parts()) {
        if (order == -1) continue;
        const UnivariateFn tr = coeff.diag();
        for (int i = 0; i < opt.grid; ++i) {
            const double x = dom.lo + dom.length() * double(i) / double(opt.grid - 1);
            const complexd v = tr.eval(x);
            dirac.add({double(order), x, v.real(), v.imag()});
        }
    }
    write_text(opt.out + "_dirac.csv", dirac.str());
}

int cmd_mul(const std::string& lhs_path, const std::string& rhs_path, const Options& opt) {
    StarElement d = parse_kernel_spec(load_json(lhs_path));
    StarElement e = parse_kernel_spec(load_json(rhs_path));
    validate_domain(d.domain(), opt);
    StarElement p = star(d, e);
    write_json(opt.out + ".json",
               json{{"command", "mul"},
                    {"result", serialize_kernel_spec(p)},
                    {"diagnostics",
                     {{"max_order", p.max_order()}, {"probe_sup", p.probe_sup()}}}});
    emit_grids(p, opt);
    return kExitOk;
}

int cmd_inv(const std::string& path, const Options& opt) {
    StarElement d = parse_kernel_spec(load_json(path));
    validate_domain(d.domain(), opt);
    StarElement inv = invert_finite_order(d, opt.tol);
    const double res = action_residual(star(d, inv), identity_element(d.domain()), 10,
                                       opt.seed);
    write_json(opt.out + ".json",
               json{{"command", "inv"},
                    {"result", serialize_kernel_spec(inv)},
                    {"residuals", {{"left_multiply_back", res}}},
                    {"diagnostics", {{"max_order", inv.max_order()}}}});
    emit_grids(inv, opt);
    return kExitOk;
}

int cmd_solve_volterra(const std::string& path, const Options& opt) {
    json j = load_json(path);
    const Interval dom = parse_domain(j, "problem");
    validate_domain(dom, opt);
    if (!j.contains("kernel") || !j["kernel"].is_object() ||
        !j["kernel"].contains("separable"))
        throw SpecError("problem.kernel.separable", "missing");
    json wrapper = {{"domain", {dom.lo, dom.hi}},
                    {"terms", {{{"order", -1}, {"coeff", j["kernel"]}}}}};
    const SeparableFn K = parse_kernel_spec(wrapper).part(-1);
    const UnivariateFn g = parse_fn_field(j, "forcing", dom, "problem");

    VolterraSolution s = solve_volterra2({K, g}, opt.tol);
    Csv grid({"x", "re", "im"});
    for (int i = 0; i < opt.grid; ++i) {
        const double x = dom.lo + dom.length() * double(i) / double(opt.grid - 1);
        const complexd v = s.u.eval(x);
        grid.add({x, v.real(), v.imag()});
    }
    write_text(opt.out + ".csv", grid.str());
    write_json(opt.out + ".json",
               json{{"command", "solve-volterra"},
                    {"residuals", {{"equation", s.residual}}},
                    {"outputs",
                     {{"u_hi_re", s.u.eval(dom.hi).real()},
                      {"u_hi_im", s.u.eval(dom.hi).imag()}}}});
    return kExitOk;
}

int cmd_toe(const std::string& path, const Options& opt) {
    json j = load_json(path);
    const Interval dom = parse_domain(j, "system");
    validate_domain(dom, opt);
    if (!j.contains("matrix") || !j["matrix"].is_array() || j["matrix"].empty())
        throw SpecError("system.matrix", "expected a square array of functions");
    const size_t r = j["matrix"].size();
    std::vector<std::vector<UnivariateFn>> A;
    for (size_t i = 0; i < r; ++i) {
        const json& row = j["matrix"][i];
        if (!row.is_array() || row.size() != r)
            throw SpecError("system.matrix[" + std::to_string(i) + "]", "ragged matrix");
        std::vector<UnivariateFn> arow;
        for (size_t k = 0; k < r; ++k) {
            json cell = {{"fn", row[k]}};
            arow.push_back(parse_fn_field(cell, "fn", dom,
                                          "system.matrix[" + std::to_string(i) + "][" +
                                              std::to_string(k) + "]"));
        }
        A.push_back(std::move(arow));
    }

    TimeOrderedExp toe = time_ordered_exp(A, opt.tol);
    // propagator columns against the left endpoint
    Csv grid({"x", "i", "j", "re", "im"});
    for (int q = 0; q < opt.grid; ++q) {
        const double x = dom.lo + dom.length() * double(q) / double(opt.grid - 1);
        const Eigen::MatrixXcd U = toe.eval(x, dom.lo);
        for (int i = 0; i < toe.dim(); ++i)
            for (int k = 0; k < toe.dim(); ++k)
                grid.add({x, double(i), double(k), U(i, k).real(), U(i, k).imag()});
    }
    write_text(opt.out + ".csv", grid.str());

    // flow-property residual on a deterministic probe triple set
    double flow = 0.0;
    const auto pts = cheb_points(dom, 5);
    for (double x : pts)
        for (double y : pts)
            for (double z : pts) {
                if (!(x >= y && y >= z)) continue;
                flow = std::max(flow, (toe.eval(x, y) * toe.eval(y, z) - toe.eval(x, z))
                                          .cwiseAbs()
                                          .maxCoeff());
            }
    write_json(opt.out + ".json", json{{"command", "toe"},
                                       {"residuals", {{"flow_property", flow}}},
                                       {"diagnostics", {{"dim", toe.dim()}}}});
    return kExitOk;
}

int cmd_metric(const std::string& lhs_path, const std::string& rhs_path,
               const Options& opt) {
    StarElement d = parse_kernel_spec(load_json(lhs_path));
    StarElement e = parse_kernel_spec(load_json(rhs_path));
    if (!(d.domain() == e.domain())) throw SpecError("domain", "operands disagree");
    validate_domain(d.domain(), opt);
    CompactFamily fam = CompactFamily::whole(d.domain(), opt.kmax);
    MetricResult m = metric(d, e, fam);
    json per_k = json::array();
    for (int k = -1; k <= opt.kmax; ++k)
        per_k.push_back(json{{"k", k}, {"p_k", seminorm(d.sub(e), k, fam)}});
    write_json(opt.out + ".json", json{{"command", "metric"},
                                       {"outputs",
                                        {{"metric", m.value},
                                         {"tail_bound", m.tail_bound},
                                         {"seminorms", per_k}}}});
    return kExitOk;
}

int cmd_discretize_check(const std::string& lhs_path, const std::string& rhs_path,
                         const Options& opt, const std::string& dump_path) {
    StarElement d = parse_kernel_spec(load_json(lhs_path));
    StarElement e = parse_kernel_spec(load_json(rhs_path));
    validate_domain(d.domain(), opt);
    std::vector<int> ns{opt.grid, 2 * opt.grid, 4 * opt.grid, 8 * opt.grid};
    ConvergenceTable t = convergence_probe(d, e, ns);

    Csv table({"n", "dx", "sup_error"});
    for (const auto& row : t.rows) table.add({double(row.n), row.dx, row.sup_error});
    write_text(opt.out + ".csv", table.str());

    json rows = json::array();
    for (const auto& row : t.rows)
        rows.push_back(json{{"n", row.n}, {"dx", row.dx}, {"sup_error", row.sup_error}});
    write_json(opt.out + ".json",
               json{{"command", "discretize-check"},
                    {"outputs", {{"rate", t.rate}, {"rows", rows}}}});

    if (!dump_path.empty()) {
        Grid g(d.domain(), ns.back());
        TriangularSample p = mat_star(sample(d, g), sample(e, g));
        std::ofstream out(dump_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + dump_path);
        write_matrix(out, p.entries);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"star-product calculus on causal distribution kernels"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--out", opt.out, "output path prefix");
    app.add_option("--grid", opt.grid, "probe/output grid size")->check(CLI::Range(2, 4096));
    app.add_option("--tol", opt.tol, "numerical tolerance");
    app.add_option("--kmax", opt.kmax, "seminorm truncation depth")
        ->check(CLI::Range(-1, 64));
    app.add_option("--seed", opt.seed, "seed for probe test functions");
    app.add_option("--domain", opt.domain, "domain override [lo hi]")->expected(2);

    if (const char* threads = std::getenv("STARCALC_THREADS")) {
        const int n = std::atoi(threads);
        if (n > 0) Eigen::setNbThreads(n);
    }

    std::string a_path, b_path, dump_path;
    auto* mul = app.add_subcommand("mul", "star product of two kernel specs");
    mul->add_option("lhs", a_path)->required();
    mul->add_option("rhs", b_path)->required();
    auto* inv = app.add_subcommand("inv", "star inverse of a kernel spec");
    inv->add_option("spec", a_path)->required();
    auto* vol = app.add_subcommand("solve-volterra", "second-kind Volterra solve");
    vol->add_option("problem", a_path)->required();
    auto* toe = app.add_subcommand("toe", "time-ordered exponential of a system");
    toe->add_option("system", a_path)->required();
    auto* met = app.add_subcommand("metric", "Frechet metric between two kernel specs");
    met->add_option("lhs", a_path)->required();
    met->add_option("rhs", b_path)->required();
    auto* dis = app.add_subcommand("discretize-check",
                                   "triangular-matrix convergence probe");
    dis->add_option("lhs", a_path)->required();
    dis->add_option("rhs", b_path)->required();
    dis->add_option("--dump", dump_path, "binary dump of the finest product matrix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitUserError;
    }

    try {
        if (mul->parsed()) return cmd_mul(a_path, b_path, opt);
        if (inv->parsed()) return cmd_inv(a_path, opt);
        if (vol->parsed()) return cmd_solve_volterra(a_path, opt);
        if (toe->parsed()) return cmd_toe(a_path, opt);
        if (met->parsed()) return cmd_metric(a_path, b_path, opt);
        if (dis->parsed()) return cmd_discretize_check(a_path, b_path, opt, dump_path);
    } catch (const SpecError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitUserError;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitUserError;
    } catch (const std::runtime_error& err) {
        std::fprintf(stderr, "numerical failure: %s\n", err.what());
        return kExitNumerical;
    }
    return kExitUserError;
}
